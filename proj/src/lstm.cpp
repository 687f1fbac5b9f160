#include "botwatch/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "botwatch/rng.hpp"

namespace botwatch {

Charset Charset::build(const std::vector<TextSample>& train) {
    std::set<unsigned char> present;
    for (const auto& sample : train) {
        for (const char c : sample.text) present.insert(static_cast<unsigned char>(c));
    }
    std::string chars;
    chars.reserve(present.size());
    for (const unsigned char c : present) chars.push_back(static_cast<char>(c));
    return from_chars(chars);
}

Charset Charset::from_chars(const std::string& chars) {
    Charset cs;
    cs.chars = chars;
    cs.map.fill(1);  // unknown
    for (std::size_t i = 0; i < chars.size(); ++i) {
        cs.map[static_cast<unsigned char>(chars[i])] = static_cast<std::int16_t>(i + 2);
    }
    return cs;
}

std::vector<int> encode(const std::string& text, const Charset& charset, int max_len) {
    std::vector<int> seq(static_cast<std::size_t>(max_len), 0);
    const std::size_t keep = std::min<std::size_t>(text.size(), static_cast<std::size_t>(max_len));
    const std::size_t pad = static_cast<std::size_t>(max_len) - keep;
    for (std::size_t i = 0; i < keep; ++i) seq[pad + i] = charset.lookup(text[i]);
    return seq;
}

template <typename S>
LstmWeightsT<S> LstmWeightsT<S>::zeros(int charset_size, int embed_dim, int hidden_dim) {
    LstmWeightsT<S> w;
    w.charset_size = charset_size;
    w.embed_dim = embed_dim;
    w.hidden_dim = hidden_dim;
    w.param.assign(w.total(), S(0));
    return w;
}

template struct LstmWeightsT<float>;
template struct LstmWeightsT<double>;

LstmWeights init_weights(int charset_size, const LstmHyper& hyper) {
    auto w = LstmWeights::zeros(charset_size, hyper.embed_dim, hyper.hidden_dim);
    SplitMix64 rng(hyper.seed);
    for (auto& p : w.param) p = rng.next_unit_float() * 0.1f - 0.05f;
    // forget-gate bias block
    const auto b = w.b_off();
    const auto h = static_cast<std::size_t>(hyper.hidden_dim);
    for (std::size_t k = 0; k < h; ++k) w.param[b + h + k] = 1.0f;
    return w;
}

namespace {

template <typename S>
S sigmoid(S z) {
    return S(1) / (S(1) + std::exp(-z));
}

// One training/inference pass over a single sequence with cached
// activations, reused across samples of a batch.
template <typename S>
struct LstmCore {
    explicit LstmCore(const LstmWeightsT<S>& weights)
        : w(weights),
          E(weights.embed_dim),
          H(weights.hidden_dim),
          emb(weights.param.data() + weights.emb_off()),
          wx(weights.param.data() + weights.w_off()),
          uh(weights.param.data() + weights.u_off()),
          bias(weights.param.data() + weights.b_off()),
          head_w(weights.param.data() + weights.head_w_off()) {}

    const LstmWeightsT<S>& w;
    int E, H;
    const S *emb, *wx, *uh, *bias, *head_w;

    std::vector<int> idx;
    std::vector<S> gates;   // T x 4H, post-activation, i|f|g|o
    std::vector<S> cells;   // T x H
    std::vector<S> tanhc;   // T x H
    std::vector<S> hidden;  // T x H
    std::vector<S> pre;     // 4H scratch
    S logit = S(0);

    // mask: nullptr, or H inverted-dropout factors applied to the final state.
    double forward(const std::vector<int>& seq, const S* mask) {
        const auto T = seq.size();
        const auto g4 = static_cast<std::size_t>(4) * H;
        idx.assign(seq.begin(), seq.end());
        gates.resize(T * g4);
        cells.assign(T * H, S(0));
        tanhc.resize(T * H);
        hidden.assign(T * H, S(0));
        pre.resize(g4);

        const S* h_prev = nullptr;
        const S* c_prev = nullptr;
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t k = 0; k < g4; ++k) pre[k] = bias[k];
            const S* x = emb + static_cast<std::size_t>(idx[t]) * E;
            for (int e = 0; e < E; ++e) {
                const S xe = x[e];
                const S* row = wx + static_cast<std::size_t>(e) * g4;
                for (std::size_t k = 0; k < g4; ++k) pre[k] += xe * row[k];
            }
            if (h_prev) {
                for (int j = 0; j < H; ++j) {
                    const S hj = h_prev[j];
                    const S* row = uh + static_cast<std::size_t>(j) * g4;
                    for (std::size_t k = 0; k < g4; ++k) pre[k] += hj * row[k];
                }
            }
            S* gate = gates.data() + t * g4;
            S* c = cells.data() + t * H;
            S* tc = tanhc.data() + t * H;
            S* h = hidden.data() + t * H;
            for (int k = 0; k < H; ++k) {
                const S gi = sigmoid(pre[k]);
                const S gf = sigmoid(pre[H + k]);
                const S gg = std::tanh(pre[2 * H + k]);
                const S go = sigmoid(pre[3 * H + k]);
                gate[k] = gi;
                gate[H + k] = gf;
                gate[2 * H + k] = gg;
                gate[3 * H + k] = go;
                const S cp = c_prev ? c_prev[k] : S(0);
                c[k] = gf * cp + gi * gg;
                tc[k] = std::tanh(c[k]);
                h[k] = go * tc[k];
            }
            h_prev = h;
            c_prev = c;
        }

        logit = w.param[w.head_b_off()];
        const S* h_last = hidden.data() + (T - 1) * H;
        for (int k = 0; k < H; ++k) {
            const S hk = mask ? h_last[k] * mask[k] : h_last[k];
            logit += head_w[k] * hk;
        }
        return 1.0 / (1.0 + std::exp(-static_cast<double>(logit)));
    }

    // dlogit = dLoss/dlogit for this sample (already batch-scaled).
    void backward(S dlogit, const S* mask, LstmWeightsT<S>& grad) {
        const auto T = idx.size();
        const auto g4 = static_cast<std::size_t>(4) * H;
        S* g_emb = grad.param.data() + grad.emb_off();
        S* g_wx = grad.param.data() + grad.w_off();
        S* g_uh = grad.param.data() + grad.u_off();
        S* g_b = grad.param.data() + grad.b_off();
        S* g_head_w = grad.param.data() + grad.head_w_off();
        S& g_head_b = grad.param[grad.head_b_off()];

        std::vector<S> dh(H), dc(H, S(0)), da(g4), dh_next(H);
        const S* h_last = hidden.data() + (T - 1) * H;
        for (int k = 0; k < H; ++k) {
            const S hk = mask ? h_last[k] * mask[k] : h_last[k];
            g_head_w[k] += dlogit * hk;
            dh[k] = dlogit * head_w[k] * (mask ? mask[k] : S(1));
        }
        g_head_b += dlogit;

        for (std::size_t t = T; t-- > 0;) {
            const S* gate = gates.data() + t * g4;
            const S* tc = tanhc.data() + t * H;
            const S* cprev = t > 0 ? cells.data() + (t - 1) * H : nullptr;
            const S* hprev = t > 0 ? hidden.data() + (t - 1) * H : nullptr;
            for (int k = 0; k < H; ++k) {
                const S gi = gate[k], gf = gate[H + k], gg = gate[2 * H + k], go = gate[3 * H + k];
                const S dct = dc[k] + dh[k] * go * (S(1) - tc[k] * tc[k]);
                const S do_ = dh[k] * tc[k];
                const S di = dct * gg;
                const S df = dct * (cprev ? cprev[k] : S(0));
                const S dg = dct * gi;
                da[k] = di * gi * (S(1) - gi);
                da[H + k] = df * gf * (S(1) - gf);
                da[2 * H + k] = dg * (S(1) - gg * gg);
                da[3 * H + k] = do_ * go * (S(1) - go);
                dc[k] = dct * gf;
            }
            for (std::size_t k = 0; k < g4; ++k) g_b[k] += da[k];
            const S* x = emb + static_cast<std::size_t>(idx[t]) * E;
            S* gx = g_emb + static_cast<std::size_t>(idx[t]) * E;
            for (int e = 0; e < E; ++e) {
                const S xe = x[e];
                const S* row = wx + static_cast<std::size_t>(e) * g4;
                S* grow = g_wx + static_cast<std::size_t>(e) * g4;
                S dxe = S(0);
                for (std::size_t k = 0; k < g4; ++k) {
                    grow[k] += xe * da[k];
                    dxe += row[k] * da[k];
                }
                gx[e] += dxe;
            }
            std::fill(dh_next.begin(), dh_next.end(), S(0));
            if (hprev) {
                for (int j = 0; j < H; ++j) {
                    const S hj = hprev[j];
                    const S* row = uh + static_cast<std::size_t>(j) * g4;
                    S* grow = g_uh + static_cast<std::size_t>(j) * g4;
                    S acc = S(0);
                    for (std::size_t k = 0; k < g4; ++k) {
                        grow[k] += hj * da[k];
                        acc += row[k] * da[k];
                    }
                    dh_next[j] = acc;
                }
            }
            dh.swap(dh_next);
        }
    }
};

double bce(double p, int y) {
    const double eps = 1e-12;
    return -(y * std::log(std::max(p, eps)) + (1 - y) * std::log(std::max(1.0 - p, eps)));
}

}  // namespace

template <typename S>
double lstm_forward(const LstmWeightsT<S>& weights, const std::vector<int>& sequence) {
    for (const int i : sequence) {
        if (i < 0 || i >= weights.charset_size) {
            throw std::runtime_error("sequence index out of charset range");
        }
    }
    if (sequence.empty()) throw std::runtime_error("cannot run forward on an empty sequence");
    LstmCore<S> core(weights);
    return core.forward(sequence, nullptr);
}

template double lstm_forward<float>(const LstmWeightsT<float>&, const std::vector<int>&);
template double lstm_forward<double>(const LstmWeightsT<double>&, const std::vector<int>&);

template <typename S>
double lstm_forward_dropout(const LstmWeightsT<S>& weights, const std::vector<int>& sequence,
                            double dropout_rate, std::uint64_t dropout_seed) {
    if (dropout_rate <= 0.0) return lstm_forward(weights, sequence);
    SplitMix64 rng(dropout_seed);
    std::vector<S> mask(static_cast<std::size_t>(weights.hidden_dim));
    const S scale = S(1.0 / (1.0 - dropout_rate));
    for (auto& m : mask) m = rng.next_unit() < dropout_rate ? S(0) : scale;
    LstmCore<S> core(weights);
    return core.forward(sequence, mask.data());
}

template double lstm_forward_dropout<float>(const LstmWeightsT<float>&, const std::vector<int>&,
                                            double, std::uint64_t);
template double lstm_forward_dropout<double>(const LstmWeightsT<double>&, const std::vector<int>&,
                                             double, std::uint64_t);

namespace {

struct EvalStats {
    double loss = 0.0;
    double acc = 0.0;
};

EvalStats eval_lstm(const LstmWeights& weights, const std::vector<std::vector<int>>& seqs,
                    const std::vector<int>& labels) {
    EvalStats stats;
    if (seqs.empty()) return stats;
    LstmCore<float> core(weights);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        const double p = core.forward(seqs[i], nullptr);
        stats.loss += bce(p, labels[i]);
        if ((p >= 0.5 ? 1 : 0) == labels[i]) ++correct;
    }
    stats.loss /= static_cast<double>(seqs.size());
    stats.acc = static_cast<double>(correct) / static_cast<double>(seqs.size());
    return stats;
}

}  // namespace

LstmTrainResult train_lstm(const std::vector<TextSample>& train,
                           const std::vector<TextSample>& val, const LstmHyper& hyper) {
    bool has_pos = false, has_neg = false;
    for (const auto& s : train) (s.label ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        throw std::runtime_error("train_lstm needs both classes in the training set");
    }
    if (hyper.dropout_rate < 0.0 || hyper.dropout_rate >= 1.0) {
        throw std::runtime_error("dropout rate must be in [0, 1)");
    }

    LstmTrainResult result;
    result.model.charset = Charset::build(train);
    result.model.hyper = hyper;
    const auto& charset = result.model.charset;

    std::vector<std::vector<int>> train_x, val_x;
    std::vector<int> train_y, val_y;
    train_x.reserve(train.size());
    for (const auto& s : train) {
        train_x.push_back(encode(s.text, charset, hyper.max_len));
        train_y.push_back(s.label);
    }
    for (const auto& s : val) {
        val_x.push_back(encode(s.text, charset, hyper.max_len));
        val_y.push_back(s.label);
    }

    auto weights = init_weights(charset.size(), hyper);
    auto grad = LstmWeights::zeros(charset.size(), hyper.embed_dim, hyper.hidden_dim);
    std::vector<float> adam_m(weights.total(), 0.0f), adam_v(weights.total(), 0.0f);
    std::int64_t adam_t = 0;

    SplitMix64 shuffle_rng(hyper.seed);
    SplitMix64 dropout_rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train_x.size());
    std::iota(order.begin(), order.end(), 0);

    LstmWeights best_weights = weights;
    double best_val = std::numeric_limits<double>::infinity();
    int stale_epochs = 0;

    LstmCore<float> core(weights);
    std::vector<float> mask(static_cast<std::size_t>(hyper.hidden_dim));
    const bool use_dropout = hyper.dropout_rate > 0.0;
    const float keep_scale = use_dropout ? static_cast<float>(1.0 / (1.0 - hyper.dropout_rate)) : 1.0f;

    for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
        fisher_yates_shuffle(order, shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t epoch_correct = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hyper.batch_size)) {
            const auto end =
                std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
            const auto batch_n = static_cast<float>(end - start);
            std::fill(grad.param.begin(), grad.param.end(), 0.0f);
            for (std::size_t i = start; i < end; ++i) {
                const auto& seq = train_x[order[i]];
                const int y = train_y[order[i]];
                const float* mask_ptr = nullptr;
                if (use_dropout) {
                    for (auto& m : mask) {
                        m = dropout_rng.next_unit() < hyper.dropout_rate ? 0.0f : keep_scale;
                    }
                    mask_ptr = mask.data();
                }
                const double p = core.forward(seq, mask_ptr);
                epoch_loss += bce(p, y);
                if ((p >= 0.5 ? 1 : 0) == y) ++epoch_correct;
                core.backward(static_cast<float>(p - y) / batch_n, mask_ptr, grad);
            }
            // adaptive-moment update
            ++adam_t;
            const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(adam_t));
            const float b1 = static_cast<float>(hyper.beta1);
            const float b2 = static_cast<float>(hyper.beta2);
            const float lr = static_cast<float>(hyper.lr);
            const float eps = static_cast<float>(hyper.epsilon);
            for (std::size_t j = 0; j < weights.param.size(); ++j) {
                const float g = grad.param[j];
                adam_m[j] = b1 * adam_m[j] + (1.0f - b1) * g;
                adam_v[j] = b2 * adam_v[j] + (1.0f - b2) * g * g;
                const float mhat = adam_m[j] / static_cast<float>(bc1);
                const float vhat = adam_v[j] / static_cast<float>(bc2);
                weights.param[j] -= lr * mhat / (std::sqrt(vhat) + eps);
            }
        }
        epoch_loss /= static_cast<double>(order.size());
        const double epoch_acc =
            static_cast<double>(epoch_correct) / static_cast<double>(order.size());
        const auto val_stats = val_x.empty()
                                   ? EvalStats{epoch_loss, epoch_acc}
                                   : eval_lstm(weights, val_x, val_y);
        if (!std::isfinite(epoch_loss) || !std::isfinite(val_stats.loss)) {
            throw std::runtime_error("training diverged (NaN loss) at epoch " +
                                     std::to_string(epoch));
        }
        result.history.push_back(EpochStats{epoch_loss, epoch_acc, val_stats.loss, val_stats.acc});

        if (val_stats.loss < best_val) {
            best_val = val_stats.loss;
            best_weights = weights;
            stale_epochs = 0;
        } else {
            ++stale_epochs;
            if (stale_epochs > hyper.patience) break;
        }
    }

    result.model.weights = std::move(best_weights);
    result.meta.epochs_run = static_cast<int>(result.history.size());
    result.meta.best_val_loss = best_val;
    return result;
}

std::vector<double> score_lstm(const LstmModel& model, const std::vector<std::string>& texts) {
    std::vector<double> scores;
    scores.reserve(texts.size());
    LstmCore<float> core(model.weights);
    for (const auto& text : texts) {
        scores.push_back(core.forward(encode(text, model.charset, model.hyper.max_len), nullptr));
    }
    return scores;
}

double lstm_mean_loss(const LstmModel& model, const std::vector<TextSample>& samples) {
    if (samples.empty()) return 0.0;
    LstmCore<float> core(model.weights);
    double loss = 0.0;
    for (const auto& s : samples) {
        const double p = core.forward(encode(s.text, model.charset, model.hyper.max_len), nullptr);
        loss += bce(p, s.label);
    }
    return loss / static_cast<double>(samples.size());
}

double gradient_check(int embed_dim, int hidden_dim, int seq_len, int charset_size,
                      std::uint64_t seed) {
    if (embed_dim > 4 || hidden_dim > 4 || seq_len > 6) {
        throw std::runtime_error("gradient_check is restricted to tiny dimensions");
    }
    SplitMix64 rng(seed);
    auto weights = LstmWeightsD::zeros(charset_size, embed_dim, hidden_dim);
    for (auto& p : weights.param) p = rng.next_unit() * 0.1 - 0.05;
    for (int k = 0; k < hidden_dim; ++k) {
        weights.param[weights.b_off() + hidden_dim + k] = 1.0;
    }

    // Three labeled sequences; loss is their mean BCE.
    const int n_seq = 3;
    std::vector<std::vector<int>> seqs;
    std::vector<int> labels;
    for (int s = 0; s < n_seq; ++s) {
        std::vector<int> seq(static_cast<std::size_t>(seq_len));
        for (auto& v : seq) v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(charset_size)));
        seqs.push_back(std::move(seq));
        labels.push_back(s % 2);
    }

    const auto loss_at = [&](const LstmWeightsD& w) {
        LstmCore<double> core(w);
        double loss = 0.0;
        for (int s = 0; s < n_seq; ++s) loss += bce(core.forward(seqs[s], nullptr), labels[s]);
        return loss / n_seq;
    };

    auto grad = LstmWeightsD::zeros(charset_size, embed_dim, hidden_dim);
    {
        LstmCore<double> core(weights);
        for (int s = 0; s < n_seq; ++s) {
            const double p = core.forward(seqs[s], nullptr);
            core.backward((p - labels[s]) / n_seq, nullptr, grad);
        }
    }

    const double step = 1e-5;
    double max_rel = 0.0;
    LstmWeightsD probe = weights;
    for (std::size_t j = 0; j < weights.param.size(); ++j) {
        const double saved = probe.param[j];
        probe.param[j] = saved + step;
        const double up = loss_at(probe);
        probe.param[j] = saved - step;
        const double down = loss_at(probe);
        probe.param[j] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double analytic = grad.param[j];
        const double denom = std::max(std::abs(numeric) + std::abs(analytic), 1e-6);
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
    }
    return max_rel;
}

}  // namespace botwatch
