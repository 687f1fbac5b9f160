#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "botwatch/artifact.hpp"
#include "botwatch/rng.hpp"
#include "support/oracles.hpp"

using namespace botwatch;
namespace ts = botwatch::testsupport;

namespace {

LstmModel small_lstm_model(std::uint64_t seed) {
    LstmModel model;
    model.charset = Charset::from_chars("abcdefghij.-");
    model.hyper.embed_dim = 6;
    model.hyper.hidden_dim = 5;
    model.hyper.max_len = 16;
    model.hyper.seed = seed;
    model.weights = init_weights(model.charset.size(), model.hyper);
    return model;
}

LinearModel small_linear_model() {
    LinearModel model;
    model.vocab.mode = FeatureMode::char_ngram;
    model.vocab.entries = {"ab", "bc", "cd"};
    for (std::size_t i = 0; i < model.vocab.entries.size(); ++i) {
        model.vocab.index.emplace(model.vocab.entries[i], static_cast<int>(i));
    }
    model.vocab.built_from = 12;
    model.weights = {0.25f, -1.5f, 3.0f};
    model.bias = 0.125f;
    model.trained_epochs = 4;
    return model;
}

const std::vector<std::string> kProbe = {"abcd.com", "zzzz.net", "a", "abcabc.org"};

}  // namespace

TEST_CASE("lstm artifact: save -> load -> save is byte-identical") {
    const auto dir = ts::make_temp_dir("artifact");
    const auto artifact = make_artifact(small_lstm_model(17), TrainMeta{3, 0.123456789});
    const auto path = dir + "/model.json";
    save_artifact(artifact, path);
    const auto first_bytes = ts::read_file(path);

    const auto loaded = load_artifact(path);
    const auto path2 = dir + "/model2.json";
    save_artifact(loaded, path2);
    CHECK(ts::read_file(path2) == first_bytes);
}

TEST_CASE("lstm artifact round trip reproduces outputs bit-exactly") {
    const auto dir = ts::make_temp_dir("artifact_probe");
    const auto artifact = make_artifact(small_lstm_model(23), TrainMeta{1, 0.5});
    const auto before = score_artifact(artifact, kProbe);
    const auto path = dir + "/m.json";
    save_artifact(artifact, path);
    const auto after = score_artifact(load_artifact(path), kProbe);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
}

TEST_CASE("linear artifact round trip") {
    const auto dir = ts::make_temp_dir("artifact_lin");
    const auto artifact = make_artifact(small_linear_model(), ModelType::ngram_lr,
                                        TrainMeta{4, 0.25});
    const auto path = dir + "/lin.json";
    save_artifact(artifact, path);
    const auto first_bytes = ts::read_file(path);
    const auto loaded = load_artifact(path);
    save_artifact(loaded, path);
    CHECK(ts::read_file(path) == first_bytes);

    REQUIRE(loaded.linear.has_value());
    CHECK(loaded.type == ModelType::ngram_lr);
    CHECK(loaded.linear->weights == artifact.linear->weights);
    CHECK(loaded.linear->bias == artifact.linear->bias);
    CHECK(loaded.linear->vocab.entries == artifact.linear->vocab.entries);
    CHECK(loaded.meta.epochs_run == 4);

    const auto before = score_artifact(artifact, kProbe);
    const auto after = score_artifact(loaded, kProbe);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
}

TEST_CASE("corrupt artifacts are fatal") {
    const auto dir = ts::make_temp_dir("artifact_bad");
    SUBCASE("missing file") { CHECK_THROWS(load_artifact(dir + "/missing.json")); }
    SUBCASE("not json") {
        const auto path = dir + "/garbage.json";
        ts::write_file(path, "this is not json");
        CHECK_THROWS(load_artifact(path));
    }
    SUBCASE("unknown model type") {
        const auto path = dir + "/unknown.json";
        ts::write_file(path, R"({"format_version":1,"model_type":"svm",)"
                             R"("metadata":{"epochs_run":0,"best_val_loss":0}})");
        CHECK_THROWS(load_artifact(path));
    }
    SUBCASE("wrong format version") {
        const auto path = dir + "/v2.json";
        ts::write_file(path, R"({"format_version":2,"model_type":"lstm",)"
                             R"("metadata":{"epochs_run":0,"best_val_loss":0}})");
        CHECK_THROWS(load_artifact(path));
    }
    SUBCASE("truncated tensor payload") {
        const auto good = make_artifact(small_lstm_model(3), TrainMeta{1, 0.4});
        auto text = artifact_to_json(good);
        const auto pos = text.find("\"data\": \"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos + 9, 8, "AAAA");  // shorten one base64 payload
        CHECK_THROWS(artifact_from_json(text));
    }
}

TEST_CASE("zero-weight artifact scores one half everywhere") {
    auto model = small_lstm_model(29);
    model.weights = LstmWeights::zeros(model.charset.size(), model.hyper.embed_dim,
                                       model.hyper.hidden_dim);
    const auto artifact = make_artifact(std::move(model), TrainMeta{});
    for (const double p : score_artifact(artifact, kProbe)) {
        CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    }
}
