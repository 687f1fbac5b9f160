// Linear baselines: character-bigram counts or token bag-of-words feeding a
// logistic regression trained by mini-batch gradient descent.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "botwatch/corpus.hpp"
#include "botwatch/model_common.hpp"

namespace botwatch {

enum class FeatureMode { char_ngram, token_bow };

struct FeatureVocab {
    FeatureMode mode = FeatureMode::char_ngram;
    int ngram = 2;
    bool bow_with_bigrams = false;  // token_bow augmented with char bigrams
    std::vector<std::string> entries;             // column index -> feature
    std::unordered_map<std::string, int> index;   // feature -> column index
    std::size_t built_from = 0;                   // training sample count
};

// Features ranked by training-set frequency (ties lexicographic), capped.
FeatureVocab build_vocab(const std::vector<TextSample>& train, FeatureMode mode,
                         std::size_t cap = 50000, bool bow_with_bigrams = false);

// Sparse counts, sorted by column index; out-of-vocab features ignored.
std::vector<std::pair<int, float>> featurize(const std::string& text,
                                             const FeatureVocab& vocab);

struct LinearModel {
    std::vector<float> weights;
    float bias = 0.0f;
    FeatureVocab vocab;
    int trained_epochs = 0;
};

struct LinearTrainConfig {
    double lr = 0.1;
    double l2 = 1e-6;
    int epochs = 10;
    int batch = 256;
    std::uint64_t seed = 42;
};

struct LinearTrainResult {
    LinearModel model;
    TrainingHistory history;
    TrainMeta meta;
};

// Deterministic given the seed; returns the epoch-end weights with the best
// validation loss. Throws when the training set has a single class.
LinearTrainResult train_linear(const std::vector<TextSample>& train,
                               const std::vector<TextSample>& val,
                               const FeatureVocab& vocab,
                               const LinearTrainConfig& config);

double score_linear(const LinearModel& model, const std::string& text);

// Mean logistic loss with L2 penalty and its gradient, double precision.
// Shared by the trainer and the finite-difference property checks.
double logistic_loss_grad(const std::vector<std::vector<std::pair<int, float>>>& features,
                          const std::vector<int>& labels,
                          const std::vector<double>& weights, double bias, double l2,
                          std::vector<double>& grad_w, double& grad_b);

}  // namespace botwatch
