// Types shared across the trainable classifiers.
#pragma once

#include <string>
#include <vector>

namespace botwatch {

enum class ModelType { lstm, ngram_lr, bow_lr };

const char* to_string(ModelType type);

struct EpochStats {
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

// One entry per epoch actually run.
using TrainingHistory = std::vector<EpochStats>;

struct TrainMeta {
    int epochs_run = 0;
    double best_val_loss = 0.0;
};

std::string history_to_csv(const TrainingHistory& history);

}  // namespace botwatch
