// Serialized trained classifiers: one JSON document holding charset/vocab,
// hyperparameters and weight tensors (base64 of little-endian float32), with
// a byte-identical save -> load -> save round trip.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "botwatch/baseline.hpp"
#include "botwatch/lstm.hpp"
#include "botwatch/model_common.hpp"

namespace botwatch {

struct ModelArtifact {
    int format_version = 1;
    ModelType type = ModelType::lstm;
    std::optional<LstmModel> lstm;
    std::optional<LinearModel> linear;
    TrainMeta meta;
};

ModelArtifact make_artifact(LstmModel model, TrainMeta meta);
ModelArtifact make_artifact(LinearModel model, ModelType type, TrainMeta meta);

std::string artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const std::string& json_text);

void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path);  // corrupt file throws

// Dispatches to the model's scorer; order-preserving.
std::vector<double> score_artifact(const ModelArtifact& artifact,
                                   const std::vector<std::string>& texts);

}  // namespace botwatch
