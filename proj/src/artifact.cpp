#include "botwatch/artifact.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace botwatch {

namespace {

using nlohmann::json;

constexpr const char* kB64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<unsigned char>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += kB64Alphabet[v & 63];
    }
    const auto rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t v = bytes[i] << 16;
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    std::array<int, 256> lut;
    lut.fill(-1);
    for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t acc = 0;
    int bits = 0;
    for (const char c : text) {
        if (c == '=') break;
        const int v = lut[static_cast<unsigned char>(c)];
        if (v < 0) throw std::runtime_error("invalid base64 payload");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

json tensor_to_json(const float* data, std::vector<std::size_t> shape) {
    std::size_t count = 1;
    for (const auto d : shape) count *= d;
    std::vector<unsigned char> bytes;
    bytes.reserve(count * 4);
    for (std::size_t i = 0; i < count; ++i) {
        const auto u = std::bit_cast<std::uint32_t>(data[i]);
        bytes.push_back(static_cast<unsigned char>(u & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 8) & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 16) & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 24) & 0xff));
    }
    return json{{"shape", shape}, {"data", base64_encode(bytes)}};
}

std::vector<float> tensor_from_json(const json& node, const std::vector<std::size_t>& shape) {
    if (!node.is_object() || !node.contains("shape") || !node.contains("data")) {
        throw std::runtime_error("malformed weight tensor");
    }
    const auto stored = node.at("shape").get<std::vector<std::size_t>>();
    if (stored != shape) throw std::runtime_error("weight tensor shape mismatch");
    std::size_t count = 1;
    for (const auto d : shape) count *= d;
    const auto bytes = base64_decode(node.at("data").get<std::string>());
    if (bytes.size() != count * 4) throw std::runtime_error("weight tensor size mismatch");
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
        values[i] = std::bit_cast<float>(u);
    }
    return values;
}

// Per-gate views of the packed [rows x 4H] blocks.
json gate_tensor(const std::vector<float>& param, std::size_t offset, std::size_t rows,
                 std::size_t hidden, int gate) {
    std::vector<float> slice(rows * hidden);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < hidden; ++k) {
            slice[r * hidden + k] = param[offset + r * 4 * hidden + gate * hidden + k];
        }
    }
    return tensor_to_json(slice.data(), {rows, hidden});
}

void load_gate_tensor(const json& node, std::vector<float>& param, std::size_t offset,
                      std::size_t rows, std::size_t hidden, int gate) {
    const auto slice = tensor_from_json(node, {rows, hidden});
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < hidden; ++k) {
            param[offset + r * 4 * hidden + gate * hidden + k] = slice[r * hidden + k];
        }
    }
}

const char* kGateNames[4] = {"i", "f", "g", "o"};

json lstm_to_json(const LstmModel& model) {
    const auto& w = model.weights;
    const auto C = static_cast<std::size_t>(w.charset_size);
    const auto E = static_cast<std::size_t>(w.embed_dim);
    const auto H = static_cast<std::size_t>(w.hidden_dim);
    json weights;
    weights["embedding"] = tensor_to_json(w.param.data() + w.emb_off(), {C, E});
    for (int g = 0; g < 4; ++g) {
        weights[std::string("w_") + kGateNames[g]] = gate_tensor(w.param, w.w_off(), E, H, g);
        weights[std::string("u_") + kGateNames[g]] = gate_tensor(w.param, w.u_off(), H, H, g);
        std::vector<float> b(H);
        for (std::size_t k = 0; k < H; ++k) b[k] = w.param[w.b_off() + g * H + k];
        weights[std::string("b_") + kGateNames[g]] = tensor_to_json(b.data(), {H});
    }
    weights["head_w"] = tensor_to_json(w.param.data() + w.head_w_off(), {H});
    weights["head_b"] = tensor_to_json(w.param.data() + w.head_b_off(), {1});

    const auto& h = model.hyper;
    const json hyper{{"embed_dim", h.embed_dim},   {"hidden_dim", h.hidden_dim},
                     {"max_len", h.max_len},       {"dropout_rate", h.dropout_rate},
                     {"lr", h.lr},                 {"beta1", h.beta1},
                     {"beta2", h.beta2},           {"epsilon", h.epsilon},
                     {"batch_size", h.batch_size}, {"max_epochs", h.max_epochs},
                     {"patience", h.patience},     {"seed", h.seed}};
    return json{{"charset", model.charset.chars}, {"hyper", hyper}, {"weights", weights}};
}

LstmModel lstm_from_json(const json& node) {
    LstmModel model;
    model.charset = Charset::from_chars(node.at("charset").get<std::string>());
    const auto& h = node.at("hyper");
    model.hyper.embed_dim = h.at("embed_dim").get<int>();
    model.hyper.hidden_dim = h.at("hidden_dim").get<int>();
    model.hyper.max_len = h.at("max_len").get<int>();
    model.hyper.dropout_rate = h.at("dropout_rate").get<double>();
    model.hyper.lr = h.at("lr").get<double>();
    model.hyper.beta1 = h.at("beta1").get<double>();
    model.hyper.beta2 = h.at("beta2").get<double>();
    model.hyper.epsilon = h.at("epsilon").get<double>();
    model.hyper.batch_size = h.at("batch_size").get<int>();
    model.hyper.max_epochs = h.at("max_epochs").get<int>();
    model.hyper.patience = h.at("patience").get<int>();
    model.hyper.seed = h.at("seed").get<std::uint64_t>();
    if (model.hyper.embed_dim <= 0 || model.hyper.hidden_dim <= 0 || model.hyper.max_len <= 0) {
        throw std::runtime_error("artifact hyperparameters out of range");
    }

    auto w = LstmWeights::zeros(model.charset.size(), model.hyper.embed_dim,
                                model.hyper.hidden_dim);
    const auto C = static_cast<std::size_t>(w.charset_size);
    const auto E = static_cast<std::size_t>(w.embed_dim);
    const auto H = static_cast<std::size_t>(w.hidden_dim);
    const auto& weights = node.at("weights");
    const auto emb = tensor_from_json(weights.at("embedding"), {C, E});
    std::copy(emb.begin(), emb.end(), w.param.begin() + w.emb_off());
    for (int g = 0; g < 4; ++g) {
        load_gate_tensor(weights.at(std::string("w_") + kGateNames[g]), w.param, w.w_off(), E, H, g);
        load_gate_tensor(weights.at(std::string("u_") + kGateNames[g]), w.param, w.u_off(), H, H, g);
        const auto b = tensor_from_json(weights.at(std::string("b_") + kGateNames[g]), {H});
        std::copy(b.begin(), b.end(), w.param.begin() + w.b_off() + g * H);
    }
    const auto head_w = tensor_from_json(weights.at("head_w"), {H});
    std::copy(head_w.begin(), head_w.end(), w.param.begin() + w.head_w_off());
    w.param[w.head_b_off()] = tensor_from_json(weights.at("head_b"), {1})[0];
    model.weights = std::move(w);
    return model;
}

json linear_to_json(const LinearModel& model) {
    json vocab{{"mode", model.vocab.mode == FeatureMode::char_ngram ? "char_ngram" : "token_bow"},
               {"ngram", model.vocab.ngram},
               {"bow_with_bigrams", model.vocab.bow_with_bigrams},
               {"built_from", model.vocab.built_from},
               {"entries", model.vocab.entries}};
    json weights;
    weights["weights"] = tensor_to_json(model.weights.data(), {model.weights.size()});
    weights["bias"] = tensor_to_json(&model.bias, {1});
    return json{{"vocab", vocab},
                {"trained_epochs", model.trained_epochs},
                {"weights", weights}};
}

LinearModel linear_from_json(const json& node) {
    LinearModel model;
    const auto& vocab = node.at("vocab");
    const auto mode = vocab.at("mode").get<std::string>();
    if (mode == "char_ngram") {
        model.vocab.mode = FeatureMode::char_ngram;
    } else if (mode == "token_bow") {
        model.vocab.mode = FeatureMode::token_bow;
    } else {
        throw std::runtime_error("unknown vocab mode: " + mode);
    }
    model.vocab.ngram = vocab.at("ngram").get<int>();
    model.vocab.bow_with_bigrams = vocab.at("bow_with_bigrams").get<bool>();
    model.vocab.built_from = vocab.at("built_from").get<std::size_t>();
    model.vocab.entries = vocab.at("entries").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < model.vocab.entries.size(); ++i) {
        model.vocab.index.emplace(model.vocab.entries[i], static_cast<int>(i));
    }
    model.trained_epochs = node.at("trained_epochs").get<int>();
    const auto& weights = node.at("weights");
    model.weights = tensor_from_json(weights.at("weights"), {model.vocab.entries.size()});
    model.bias = tensor_from_json(weights.at("bias"), {1})[0];
    return model;
}

}  // namespace

ModelArtifact make_artifact(LstmModel model, TrainMeta meta) {
    ModelArtifact artifact;
    artifact.type = ModelType::lstm;
    artifact.lstm = std::move(model);
    artifact.meta = meta;
    return artifact;
}

ModelArtifact make_artifact(LinearModel model, ModelType type, TrainMeta meta) {
    if (type == ModelType::lstm) throw std::runtime_error("linear artifact cannot be lstm-typed");
    ModelArtifact artifact;
    artifact.type = type;
    artifact.linear = std::move(model);
    artifact.meta = meta;
    return artifact;
}

std::string artifact_to_json(const ModelArtifact& artifact) {
    json doc;
    doc["format_version"] = artifact.format_version;
    doc["model_type"] = to_string(artifact.type);
    doc["metadata"] = json{{"epochs_run", artifact.meta.epochs_run},
                           {"best_val_loss", artifact.meta.best_val_loss}};
    if (artifact.type == ModelType::lstm) {
        if (!artifact.lstm) throw std::runtime_error("lstm artifact has no model payload");
        doc["model"] = lstm_to_json(*artifact.lstm);
    } else {
        if (!artifact.linear) throw std::runtime_error("linear artifact has no model payload");
        doc["model"] = linear_to_json(*artifact.linear);
    }
    return doc.dump(2) + "\n";
}

ModelArtifact artifact_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("corrupt model artifact: ") + e.what());
    }
    try {
        ModelArtifact artifact;
        artifact.format_version = doc.at("format_version").get<int>();
        if (artifact.format_version != 1) {
            throw std::runtime_error("unsupported artifact format_version");
        }
        const auto type = doc.at("model_type").get<std::string>();
        artifact.meta.epochs_run = doc.at("metadata").at("epochs_run").get<int>();
        artifact.meta.best_val_loss = doc.at("metadata").at("best_val_loss").get<double>();
        if (type == "lstm") {
            artifact.type = ModelType::lstm;
            artifact.lstm = lstm_from_json(doc.at("model"));
        } else if (type == "ngram_lr" || type == "bow_lr") {
            artifact.type = type == "ngram_lr" ? ModelType::ngram_lr : ModelType::bow_lr;
            artifact.linear = linear_from_json(doc.at("model"));
        } else {
            throw std::runtime_error("unknown model_type: " + type);
        }
        return artifact;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("corrupt model artifact: ") + e.what());
    }
}

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model artifact: " + path);
    out << artifact_to_json(artifact);
}

ModelArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read model artifact: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return artifact_from_json(buffer.str());
}

std::vector<double> score_artifact(const ModelArtifact& artifact,
                                   const std::vector<std::string>& texts) {
    if (artifact.type == ModelType::lstm) {
        if (!artifact.lstm) throw std::runtime_error("lstm artifact has no model payload");
        return score_lstm(*artifact.lstm, texts);
    }
    if (!artifact.linear) throw std::runtime_error("linear artifact has no model payload");
    std::vector<double> scores;
    scores.reserve(texts.size());
    for (const auto& text : texts) scores.push_back(score_linear(*artifact.linear, text));
    return scores;
}

}  // namespace botwatch
