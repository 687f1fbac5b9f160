// Character-level LSTM binary classifier, built from scratch: learned
// embedding, single LSTM layer, dropout on the final state, sigmoid head.
// Trained by backpropagation through time over the full padded length.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"
#include "botwatch/model_common.hpp"

namespace botwatch {

// Index 0 is padding, index 1 unknown; trainable characters start at 2.
struct Charset {
    std::string chars;  // characters in ascending byte order
    std::array<std::int16_t, 256> map{};

    static Charset build(const std::vector<TextSample>& train);
    static Charset from_chars(const std::string& chars);

    int size() const { return static_cast<int>(chars.size()) + 2; }
    int lookup(char c) const { return map[static_cast<unsigned char>(c)]; }
};

// Fixed-length index sequence: unknown characters map to 1, long texts keep
// their leftmost max_len characters, short ones are pre-padded with 0 so the
// string's end stays adjacent to the read-out state.
std::vector<int> encode(const std::string& text, const Charset& charset, int max_len);

struct LstmHyper {
    int embed_dim = 128;
    int hidden_dim = 128;
    int max_len = 64;  // 64 for domains, 128 for URLs
    double dropout_rate = 0.5;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 128;
    int max_epochs = 25;
    int patience = 3;
    std::uint64_t seed = 42;
};

// All parameters live in one flat buffer:
//   [embedding | W | U | b | head_w | head_b]
// W and U keep the four gates packed per row in i,f,g,o order, so one row
// covers 4*hidden columns.
template <typename S>
struct LstmWeightsT {
    int charset_size = 0;
    int embed_dim = 0;
    int hidden_dim = 0;
    std::vector<S> param;

    static LstmWeightsT zeros(int charset_size, int embed_dim, int hidden_dim);

    std::size_t emb_off() const { return 0; }
    std::size_t w_off() const { return static_cast<std::size_t>(charset_size) * embed_dim; }
    std::size_t u_off() const { return w_off() + static_cast<std::size_t>(embed_dim) * 4 * hidden_dim; }
    std::size_t b_off() const { return u_off() + static_cast<std::size_t>(hidden_dim) * 4 * hidden_dim; }
    std::size_t head_w_off() const { return b_off() + 4 * static_cast<std::size_t>(hidden_dim); }
    std::size_t head_b_off() const { return head_w_off() + static_cast<std::size_t>(hidden_dim); }
    std::size_t total() const { return head_b_off() + 1; }
};

using LstmWeights = LstmWeightsT<float>;
using LstmWeightsD = LstmWeightsT<double>;

// Uniform(-0.05, 0.05) from the seeded splitmix64 stream; forget-gate bias 1.
LstmWeights init_weights(int charset_size, const LstmHyper& hyper);

struct LstmModel {
    Charset charset;
    LstmHyper hyper;
    LstmWeights weights;
};

// Inference-mode forward pass (dropout off).
template <typename S>
double lstm_forward(const LstmWeightsT<S>& weights, const std::vector<int>& sequence);

// Training-mode forward with inverted dropout on the final hidden state;
// the mask is drawn from a stream seeded with dropout_seed.
template <typename S>
double lstm_forward_dropout(const LstmWeightsT<S>& weights, const std::vector<int>& sequence,
                            double dropout_rate, std::uint64_t dropout_seed);

struct LstmTrainResult {
    LstmModel model;
    TrainingHistory history;
    TrainMeta meta;
};

// Mini-batch BPTT with adaptive-moment updates, early stopping on validation
// loss (best-epoch weights restored). Deterministic given hyper.seed; a NaN
// loss aborts with the epoch index.
LstmTrainResult train_lstm(const std::vector<TextSample>& train,
                           const std::vector<TextSample>& val, const LstmHyper& hyper);

// Order-preserving batch scoring, dropout off.
std::vector<double> score_lstm(const LstmModel& model, const std::vector<std::string>& texts);

// Mean binary cross-entropy of the model over labeled samples, dropout off.
double lstm_mean_loss(const LstmModel& model, const std::vector<TextSample>& samples);

// Analytic BPTT gradients vs central finite differences (step 1e-5) on a
// random tiny double-precision model; returns the max relative error.
double gradient_check(int embed_dim, int hidden_dim, int seq_len, int charset_size,
                      std::uint64_t seed);

}  // namespace botwatch
