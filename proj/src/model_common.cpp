#include "botwatch/model_common.hpp"

#include <cstdio>

namespace botwatch {

const char* to_string(ModelType type) {
    switch (type) {
        case ModelType::lstm: return "lstm";
        case ModelType::ngram_lr: return "ngram_lr";
        case ModelType::bow_lr: return "bow_lr";
    }
    return "unknown";
}

std::string history_to_csv(const TrainingHistory& history) {
    std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
    char line[160];
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& e = history[i];
        std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f,%.6f\n", i + 1, e.train_loss,
                      e.train_acc, e.val_loss, e.val_acc);
        out += line;
    }
    return out;
}

}  // namespace botwatch
