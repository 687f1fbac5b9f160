#include "botwatch/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "botwatch/rng.hpp"

namespace botwatch {

namespace {

constexpr std::string_view kTokenDelims = "/.?=&-_:@%";

// Combined bow+bigram vocabularies keep the two feature spaces apart with a
// prefix on the bigram side.
constexpr std::string_view kBigramPrefix = "2g:";

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void each_bigram(const std::string& text, int n, const auto& fn) {
    if (static_cast<int>(text.size()) < n) return;
    for (std::size_t i = 0; i + n <= text.size(); ++i) fn(text.substr(i, n));
}

void each_token(const std::string& text, const auto& fn) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || kTokenDelims.find(text[i]) != std::string_view::npos) {
            if (i > start) fn(text.substr(start, i - start));
            start = i + 1;
        }
    }
}

void each_feature(const std::string& text, const FeatureVocab& vocab, const auto& fn) {
    if (vocab.mode == FeatureMode::char_ngram) {
        each_bigram(text, vocab.ngram, fn);
        return;
    }
    each_token(text, fn);
    if (vocab.bow_with_bigrams) {
        each_bigram(text, vocab.ngram,
                    [&](const std::string& g) { fn(std::string(kBigramPrefix) + g); });
    }
}

}  // namespace

FeatureVocab build_vocab(const std::vector<TextSample>& train, FeatureMode mode,
                         std::size_t cap, bool bow_with_bigrams) {
    FeatureVocab vocab;
    vocab.mode = mode;
    vocab.bow_with_bigrams = mode == FeatureMode::token_bow && bow_with_bigrams;
    vocab.built_from = train.size();

    std::map<std::string, std::size_t> counts;
    for (const auto& sample : train) {
        each_feature(sample.text, vocab, [&](const std::string& f) { ++counts[f]; });
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (cap != 0 && ranked.size() > cap) ranked.resize(cap);
    vocab.entries.reserve(ranked.size());
    for (auto& [feature, count] : ranked) {
        vocab.index.emplace(feature, static_cast<int>(vocab.entries.size()));
        vocab.entries.push_back(std::move(feature));
    }
    return vocab;
}

std::vector<std::pair<int, float>> featurize(const std::string& text,
                                             const FeatureVocab& vocab) {
    std::map<int, float> counts;
    each_feature(text, vocab, [&](const std::string& f) {
        const auto it = vocab.index.find(f);
        if (it != vocab.index.end()) counts[it->second] += 1.0f;
    });
    return {counts.begin(), counts.end()};
}

double logistic_loss_grad(const std::vector<std::vector<std::pair<int, float>>>& features,
                          const std::vector<int>& labels,
                          const std::vector<double>& weights, double bias, double l2,
                          std::vector<double>& grad_w, double& grad_b) {
    const auto n = features.size();
    grad_w.assign(weights.size(), 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (const auto& [col, count] : features[i]) z += weights[col] * count;
        const double p = sigmoid(z);
        const double y = labels[i];
        // Clamped log keeps the loss finite on saturated predictions.
        loss += -(y * std::log(std::max(p, 1e-12)) +
                  (1.0 - y) * std::log(std::max(1.0 - p, 1e-12)));
        const double err = (p - y) / static_cast<double>(n);
        for (const auto& [col, count] : features[i]) grad_w[col] += err * count;
        grad_b += err;
    }
    loss /= static_cast<double>(n);
    double penalty = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        penalty += weights[j] * weights[j];
        grad_w[j] += l2 * weights[j];
    }
    return loss + 0.5 * l2 * penalty;
}

namespace {

struct EvalStats {
    double loss = 0.0;
    double acc = 0.0;
};

EvalStats eval_linear(const std::vector<double>& weights, double bias,
                      const std::vector<std::vector<std::pair<int, float>>>& features,
                      const std::vector<int>& labels) {
    EvalStats stats;
    if (features.empty()) return stats;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = bias;
        for (const auto& [col, count] : features[i]) z += weights[col] * count;
        const double p = sigmoid(z);
        const double y = labels[i];
        stats.loss += -(y * std::log(std::max(p, 1e-12)) +
                        (1.0 - y) * std::log(std::max(1.0 - p, 1e-12)));
        if ((p >= 0.5 ? 1 : 0) == labels[i]) ++correct;
    }
    stats.loss /= static_cast<double>(features.size());
    stats.acc = static_cast<double>(correct) / static_cast<double>(features.size());
    return stats;
}

}  // namespace

LinearTrainResult train_linear(const std::vector<TextSample>& train,
                               const std::vector<TextSample>& val,
                               const FeatureVocab& vocab,
                               const LinearTrainConfig& config) {
    bool has_pos = false, has_neg = false;
    for (const auto& s : train) (s.label ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        throw std::runtime_error("train_linear needs both classes in the training set");
    }

    std::vector<std::vector<std::pair<int, float>>> train_x, val_x;
    std::vector<int> train_y, val_y;
    train_x.reserve(train.size());
    for (const auto& s : train) {
        train_x.push_back(featurize(s.text, vocab));
        train_y.push_back(s.label);
    }
    for (const auto& s : val) {
        val_x.push_back(featurize(s.text, vocab));
        val_y.push_back(s.label);
    }

    std::vector<double> weights(vocab.entries.size(), 0.0);
    double bias = 0.0;
    std::vector<double> best_weights = weights;
    double best_bias = bias;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;

    SplitMix64 rng(config.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    LinearTrainResult result;
    std::vector<double> grad_w;
    double grad_b = 0.0;
    std::vector<std::vector<std::pair<int, float>>> batch_x;
    std::vector<int> batch_y;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        fisher_yates_shuffle(order, rng);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch)) {
            const auto end = std::min(order.size(), start + static_cast<std::size_t>(config.batch));
            batch_x.clear();
            batch_y.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch_x.push_back(train_x[order[i]]);
                batch_y.push_back(train_y[order[i]]);
            }
            logistic_loss_grad(batch_x, batch_y, weights, bias, config.l2, grad_w, grad_b);
            for (std::size_t j = 0; j < weights.size(); ++j) weights[j] -= config.lr * grad_w[j];
            bias -= config.lr * grad_b;
        }
        const auto train_stats = eval_linear(weights, bias, train_x, train_y);
        const auto val_stats = val_x.empty() ? train_stats
                                             : eval_linear(weights, bias, val_x, val_y);
        result.history.push_back(
            EpochStats{train_stats.loss, train_stats.acc, val_stats.loss, val_stats.acc});
        if (val_stats.loss < best_val) {
            best_val = val_stats.loss;
            best_weights = weights;
            best_bias = bias;
            best_epoch = epoch;
        }
    }

    result.model.vocab = vocab;
    result.model.trained_epochs = static_cast<int>(result.history.size());
    result.model.weights.assign(best_weights.begin(), best_weights.end());
    result.model.bias = static_cast<float>(best_bias);
    result.meta.epochs_run = result.model.trained_epochs;
    result.meta.best_val_loss = best_val;
    (void)best_epoch;
    return result;
}

double score_linear(const LinearModel& model, const std::string& text) {
    double z = model.bias;
    for (const auto& [col, count] : featurize(text, model.vocab)) {
        z += static_cast<double>(model.weights[col]) * count;
    }
    return sigmoid(z);
}

}  // namespace botwatch
