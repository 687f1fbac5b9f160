#include "botwatch/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "botwatch/artifact.hpp"
#include "botwatch/baseline.hpp"
#include "botwatch/corpus.hpp"
#include "botwatch/dgagen.hpp"
#include "botwatch/dnstunnel.hpp"
#include "botwatch/evalharness.hpp"
#include "botwatch/lstm.hpp"
#include "botwatch/spoofgen.hpp"
#include "botwatch/textutil.hpp"
#include "botwatch/whoisgraph.hpp"

namespace botwatch {

namespace {

constexpr const char* kVersion = "botwatch 1.0.0";

class PhaseTimer {
public:
    explicit PhaseTimer(std::string name)
        : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
        std::cerr << "[botwatch] phase=" << name_ << " ms=" << ms << "\n";
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << content;
}

std::vector<FuzzTechnique> parse_techniques(const std::string& csv) {
    if (csv.empty()) return all_techniques();
    std::vector<FuzzTechnique> techniques;
    std::stringstream ss(csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
        const auto technique = technique_from_string(name);
        if (!technique) throw CLI::ValidationError("--techniques", "unknown technique: " + name);
        techniques.push_back(*technique);
    }
    return techniques;
}

std::array<double, 3> parse_fractions(const std::string& csv) {
    std::array<double, 3> fractions{};
    std::stringstream ss(csv);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',') && i < 3) fractions[i++] = std::stod(part);
    if (i != 3) throw CLI::ValidationError("--fractions", "expected three comma-separated values");
    return fractions;
}

std::vector<double> parse_target_list(const std::string& csv) {
    std::vector<double> targets;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) targets.push_back(std::stod(part));
    return targets;
}

std::vector<TextSample> load_labeled_tsv(const std::string& path, SampleKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labeled file: " + path);
    std::vector<TextSample> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("labeled file needs label\\ttext lines");
        const int label = std::stoi(line.substr(0, tab));
        samples.push_back(TextSample{line.substr(tab + 1), label, kind, path});
    }
    return samples;
}

std::string labeled_tsv(const std::vector<TextSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        out += std::to_string(s.label);
        out += '\t';
        out += s.text;
        out += '\n';
    }
    return out;
}

// ---- spoofgen -------------------------------------------------------------

struct SpoofGenArgs {
    std::string domain, techniques, out;
};

void run_spoof_gen(const SpoofGenArgs& args) {
    PhaseTimer timer("spoofgen.gen");
    const auto perms = generate(normalize_domain(args.domain), parse_techniques(args.techniques));
    std::string out;
    for (const auto& p : perms) {
        out += to_string(p.technique);
        out += '\t';
        out += p.candidate;
        out += '\n';
    }
    write_output(args.out, out);
}

struct SpoofWatchArgs {
    std::string brands, feed, out, techniques;
};

void run_spoof_watch(const SpoofWatchArgs& args) {
    WatchIndex index = [&] {
        PhaseTimer timer("spoofgen.index");
        const auto brand_load = load_line_list(args.brands, 0, SampleKind::domain);
        std::vector<std::string> brands;
        for (const auto& s : brand_load.samples) brands.push_back(s.text);
        return WatchIndex::build(brands, parse_techniques(args.techniques));
    }();

    PhaseTimer timer("spoofgen.watch");
    std::ifstream in(args.feed);
    if (!in) throw std::runtime_error("cannot open feed file: " + args.feed);
    std::vector<std::pair<std::string, std::int64_t>> observed;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') {
            ++line_no;
            continue;
        }
        // feed lines are "domain" or "epoch_ms<TAB>domain"; bare lines use
        // the line index as a stand-in timestamp
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            observed.emplace_back(normalize_domain(line), line_no);
        } else {
            observed.emplace_back(normalize_domain(line.substr(tab + 1)),
                                  std::stoll(line.substr(0, tab)));
        }
        ++line_no;
    }
    const auto hits = match_stream(index, observed);
    std::string out;
    for (const auto& hit : hits) {
        const nlohmann::json doc{{"observed", hit.observed},
                                 {"brand", hit.brand},
                                 {"technique", to_string(hit.permutation.technique)},
                                 {"first_seen", hit.first_seen}};
        out += doc.dump();
        out += '\n';
    }
    write_output(args.out, out);
}

// ---- whois ----------------------------------------------------------------

struct WhoisRankArgs {
    std::string fixtures, algo = "pagerank", dot, out;
    int top = 20;
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 100;
};

void run_whois_rank(const WhoisRankArgs& args) {
    PhaseTimer timer("whois.rank");
    const auto load = parse_whois_fixture(args.fixtures);
    if (load.skipped > 0) {
        std::cerr << "[botwatch] warning: skipped " << load.skipped
                  << " fixture blocks without a Domain Name\n";
    }
    const auto graph = build_graph(load.records);
    std::vector<double> scores(graph.nodes.size(), 0.0);
    if (args.algo == "pagerank") {
        const auto result = pagerank(graph, args.damping, args.tol, args.max_iter);
        scores = result.scores;
        std::cerr << "[botwatch] pagerank iterations=" << result.iterations
                  << " converged=" << (result.converged ? "yes" : "no") << "\n";
    } else if (args.algo == "hits") {
        const auto result = hits(graph, args.tol, args.max_iter);
        for (const auto& node : graph.nodes) {
            scores[node.id] = node.kind == NodeKind::domain ? result.hub[node.id]
                                                            : result.authority[node.id];
        }
        std::cerr << "[botwatch] hits iterations=" << result.iterations
                  << " converged=" << (result.converged ? "yes" : "no") << "\n";
    } else {
        throw CLI::ValidationError("--algo", "expected pagerank or hits");
    }

    const auto order = ranked_nodes(graph, scores);
    std::string out;
    char line[512];
    int emitted = 0;
    for (const int id : order) {
        if (args.top > 0 && emitted >= args.top) break;
        const auto& node = graph.nodes[id];
        std::snprintf(line, sizeof(line), "%s\t%s\t%.12g\n",
                      node.kind == NodeKind::domain ? "domain" : "attribute",
                      node.value.c_str(), scores[id]);
        out += line;
        ++emitted;
    }
    write_output(args.out, out);
    if (!args.dot.empty()) write_output(args.dot, to_dot(graph));
}

struct WhoisCampaignArgs {
    std::string fixtures, out;
    std::int64_t window_secs = 3600;
};

void run_whois_campaigns(const WhoisCampaignArgs& args) {
    PhaseTimer timer("whois.campaigns");
    const auto load = parse_whois_fixture(args.fixtures);
    const auto clusters = campaigns(load.records, args.window_secs);
    std::string out;
    for (const auto& cluster : clusters) {
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            if (i > 0) out += ',';
            out += cluster[i];
        }
        out += '\n';
    }
    write_output(args.out, out);
}

// ---- dga ------------------------------------------------------------------

struct DgaGenArgs {
    std::string family = "lcg_char", tld = "com", date, out;
    std::uint64_t seed = 42;  // unseeded runs stay reproducible
    std::size_t count = 10;
    int length = 12;
};

void run_dga_gen(const DgaGenArgs& args) {
    PhaseTimer timer("dga.gen");
    DgaConfig config;
    if (args.family == "lcg_char") {
        config.family = DgaFamily::lcg_char;
    } else if (args.family == "hash_hex") {
        config.family = DgaFamily::hash_hex;
    } else if (args.family == "wordlist_concat") {
        config.family = DgaFamily::wordlist_concat;
    } else if (args.family == "date_seeded") {
        config.family = DgaFamily::date_seeded;
    } else {
        throw CLI::ValidationError("--family", "unknown family: " + args.family);
    }
    config.seed = args.seed;
    config.count = args.count;
    config.length = args.length;
    config.tld = args.tld;
    if (config.family == DgaFamily::date_seeded) {
        if (args.date.size() != 10 || args.date[4] != '-' || args.date[7] != '-') {
            throw CLI::ValidationError("--date", "expected YYYY-MM-DD");
        }
        config.date.year = std::stoi(args.date.substr(0, 4));
        config.date.month = std::stoi(args.date.substr(5, 2));
        config.date.day = std::stoi(args.date.substr(8, 2));
    }
    const auto samples = generate_dga(config);
    std::string out;
    for (const auto& s : samples) {
        out += s.text;
        out += '\n';
    }
    write_output(args.out, out);
}

// ---- model ----------------------------------------------------------------

struct ModelTrainArgs {
    std::string arch = "lstm", task = "dga";
    std::string benign, benign_ranking, malicious;
    std::size_t benign_limit = 0;
    std::string fractions = "0.8,0.1,0.1";
    std::string out, history, emit_test;
    int embed_dim = 128, hidden_dim = 128, max_len = 0;
    double dropout = 0.5, lr = -1.0, l2 = 1e-6;
    int batch = 0, max_epochs = 0, patience = 3, epochs = 10;
    bool bow_bigrams = false;
    std::uint64_t seed = 42;
};

void run_model_train(const ModelTrainArgs& args) {
    const SampleKind kind = args.task == "phish" ? SampleKind::url : SampleKind::domain;

    std::vector<std::vector<TextSample>> sources;
    {
        PhaseTimer timer("model.load");
        if (!args.benign_ranking.empty()) {
            sources.push_back(load_domain_ranking(args.benign_ranking, args.benign_limit).samples);
        } else if (!args.benign.empty()) {
            sources.push_back(load_line_list(args.benign, 0, kind).samples);
        } else {
            throw CLI::ValidationError("--benign", "need --benign or --benign-ranking");
        }
        if (args.malicious.empty()) {
            throw CLI::ValidationError("--malicious", "a malicious input file is required");
        }
        sources.push_back(load_line_list(args.malicious, 1, kind).samples);
    }
    const auto merged = merge_sources(sources);
    if (merged.conflicts > 0) {
        std::cerr << "[botwatch] warning: dropped " << merged.conflicts
                  << " cross-source label conflicts\n";
    }

    DatasetSplit split;
    {
        PhaseTimer timer("model.split");
        split = stratified_split(merged.samples, args.seed, parse_fractions(args.fractions));
    }
    std::cerr << "[botwatch] split sizes train=" << split.train.size()
              << " val=" << split.validation.size() << " test=" << split.test.size() << "\n";

    ModelArtifact artifact;
    TrainingHistory history;
    {
        PhaseTimer timer("model.train");
        if (args.arch == "lstm") {
            LstmHyper hyper;
            hyper.embed_dim = args.embed_dim;
            hyper.hidden_dim = args.hidden_dim;
            hyper.max_len = args.max_len > 0 ? args.max_len
                                             : (kind == SampleKind::url ? 128 : 64);
            hyper.dropout_rate = args.dropout;
            if (args.lr > 0) hyper.lr = args.lr;
            if (args.batch > 0) hyper.batch_size = args.batch;
            if (args.max_epochs > 0) hyper.max_epochs = args.max_epochs;
            hyper.patience = args.patience;
            hyper.seed = args.seed;
            auto result = train_lstm(split.train, split.validation, hyper);
            history = std::move(result.history);
            artifact = make_artifact(std::move(result.model), result.meta);
        } else if (args.arch == "ngram-lr" || args.arch == "bow-lr") {
            const auto mode = args.arch == "ngram-lr" ? FeatureMode::char_ngram
                                                      : FeatureMode::token_bow;
            const auto vocab = build_vocab(split.train, mode, 50000, args.bow_bigrams);
            LinearTrainConfig config;
            if (args.lr > 0) config.lr = args.lr;
            config.l2 = args.l2;
            config.epochs = args.epochs;
            if (args.batch > 0) config.batch = args.batch;
            config.seed = args.seed;
            auto result = train_linear(split.train, split.validation, vocab, config);
            history = std::move(result.history);
            artifact = make_artifact(std::move(result.model),
                                     mode == FeatureMode::char_ngram ? ModelType::ngram_lr
                                                                     : ModelType::bow_lr,
                                     result.meta);
        } else {
            throw CLI::ValidationError("--arch", "expected lstm, ngram-lr or bow-lr");
        }
    }

    {
        PhaseTimer timer("model.save");
        save_artifact(artifact, args.out);
        if (!args.history.empty()) write_output(args.history, history_to_csv(history));
        if (!args.emit_test.empty()) write_output(args.emit_test, labeled_tsv(split.test));
    }
    std::cerr << "[botwatch] epochs_run=" << artifact.meta.epochs_run
              << " best_val_loss=" << artifact.meta.best_val_loss << "\n";
}

struct ModelClassifyArgs {
    std::string model, input, out;
};

// Items to score can be domains or full URLs; normalize per the model's
// input style but never reject lines, scoring is best-effort.
bool model_takes_urls(const ModelArtifact& artifact) {
    if (artifact.type == ModelType::bow_lr) return true;
    if (artifact.type == ModelType::lstm && artifact.lstm) {
        return artifact.lstm->hyper.max_len > 64;
    }
    return false;
}

void run_model_classify(const ModelClassifyArgs& args) {
    const auto artifact = load_artifact(args.model);
    PhaseTimer timer("model.classify");
    const bool urls = model_takes_urls(artifact);
    std::ifstream in(args.input);
    if (!in) throw std::runtime_error("cannot open input file: " + args.input);
    std::vector<std::string> texts;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto item = urls ? normalize_url(line) : normalize_domain(line);
        if (item.empty() || item[0] == '#') continue;
        texts.push_back(std::move(item));
    }
    const auto scores = score_artifact(artifact, texts);
    std::string out;
    char row[1024];
    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::snprintf(row, sizeof(row), "%.6f\t%s\n", scores[i], texts[i].c_str());
        out += row;
    }
    write_output(args.out, out);
}

struct ModelEvalArgs {
    std::string model, test, roc_csv, report;
    std::string fpr_targets = "0.001,0.007,0.01,0.016";
    bool interpolate = false;
};

void run_model_eval(const ModelEvalArgs& args) {
    const auto artifact = load_artifact(args.model);
    PhaseTimer timer("model.eval");
    const SampleKind kind = model_takes_urls(artifact) ? SampleKind::url : SampleKind::domain;
    const auto test = load_labeled_tsv(args.test, kind);
    const auto output = evaluate(artifact, test, parse_target_list(args.fpr_targets),
                                 args.interpolate);
    if (!args.roc_csv.empty()) write_output(args.roc_csv, roc_to_csv(output.curve));
    write_output(args.report, report_to_json(output.report));
}

// ---- dns ------------------------------------------------------------------

struct DnsScoreArgs {
    std::string log, config, out;
};

void run_dns_score(const DnsScoreArgs& args) {
    TunnelConfig config;
    if (!args.config.empty()) config = load_tunnel_config(args.config);
    DnsLogLoad load;
    {
        PhaseTimer timer("dns.load");
        load = load_dns_log(args.log);
    }
    if (load.rejected > 0) {
        std::cerr << "[botwatch] warning: rejected " << load.rejected << " malformed log rows\n";
    }
    PhaseTimer timer("dns.score");
    const auto alerts = detect(load.records, config);
    write_output(args.out, alerts_to_jsonl(alerts));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Multi-stage banking-botnet detection toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // spoofgen
    auto* spoof = app.add_subcommand("spoofgen", "Domain spoof permutation engine");
    spoof->require_subcommand(1);
    SpoofGenArgs spoof_gen_args;
    auto* spoof_gen = spoof->add_subcommand("gen", "Generate permutations of one domain");
    spoof_gen->add_option("--domain", spoof_gen_args.domain, "Protected domain")->required();
    spoof_gen->add_option("--techniques", spoof_gen_args.techniques,
                          "Comma-separated technique subset (default: all)");
    spoof_gen->add_option("--out", spoof_gen_args.out, "Output TSV (default: stdout)");
    spoof_gen->callback([&] { run_spoof_gen(spoof_gen_args); });

    SpoofWatchArgs spoof_watch_args;
    auto* spoof_watch = spoof->add_subcommand("watch", "Match an observed-domain feed");
    spoof_watch->add_option("--brands", spoof_watch_args.brands, "Brand domain list")->required();
    spoof_watch->add_option("--feed", spoof_watch_args.feed, "Observed domains feed")->required();
    spoof_watch->add_option("--out", spoof_watch_args.out, "Hits as JSON lines")->required();
    spoof_watch->add_option("--techniques", spoof_watch_args.techniques,
                            "Comma-separated technique subset (default: all)");
    spoof_watch->callback([&] { run_spoof_watch(spoof_watch_args); });

    // whois
    auto* whois = app.add_subcommand("whois", "WHOIS link analysis");
    whois->require_subcommand(1);
    WhoisRankArgs whois_rank_args;
    auto* whois_rank = whois->add_subcommand("rank", "Rank graph nodes");
    whois_rank->add_option("--fixtures", whois_rank_args.fixtures, "Fixture file or directory")
        ->required();
    whois_rank->add_option("--algo", whois_rank_args.algo, "pagerank or hits");
    whois_rank->add_option("--top", whois_rank_args.top, "Rows to emit, 0 = all");
    whois_rank->add_option("--damping", whois_rank_args.damping, "PageRank damping");
    whois_rank->add_option("--tol", whois_rank_args.tol, "Convergence tolerance");
    whois_rank->add_option("--max-iter", whois_rank_args.max_iter, "Iteration cap");
    whois_rank->add_option("--dot", whois_rank_args.dot, "Also write Graphviz text");
    whois_rank->add_option("--out", whois_rank_args.out, "Output TSV (default: stdout)");
    whois_rank->callback([&] { run_whois_rank(whois_rank_args); });

    WhoisCampaignArgs whois_campaign_args;
    auto* whois_campaigns = whois->add_subcommand("campaigns", "Bulk-registration clusters");
    whois_campaigns
        ->add_option("--fixtures", whois_campaign_args.fixtures, "Fixture file or directory")
        ->required();
    whois_campaigns->add_option("--window-secs", whois_campaign_args.window_secs,
                                "Same-registrar creation window");
    whois_campaigns->add_option("--out", whois_campaign_args.out, "Output (default: stdout)");
    whois_campaigns->callback([&] { run_whois_campaigns(whois_campaign_args); });

    // dga
    auto* dga = app.add_subcommand("dga", "Reference DGA generators");
    dga->require_subcommand(1);
    DgaGenArgs dga_args;
    auto* dga_gen = dga->add_subcommand("gen", "Generate labeled DGA domains");
    dga_gen->add_option("--family", dga_args.family,
                        "lcg_char, hash_hex, wordlist_concat or date_seeded");
    dga_gen->add_option("--seed", dga_args.seed, "Generator seed");
    dga_gen->add_option("--count", dga_args.count, "Domains to emit");
    dga_gen->add_option("--len", dga_args.length, "Label length");
    dga_gen->add_option("--tld", dga_args.tld, "Public suffix");
    dga_gen->add_option("--date", dga_args.date, "YYYY-MM-DD, date_seeded only");
    dga_gen->add_option("--out", dga_args.out, "Output line list (default: stdout)");
    dga_gen->callback([&] { run_dga_gen(dga_args); });

    auto* dga_families = dga->add_subcommand("families", "List family descriptors");
    dga_families->callback([&] {
        std::string out;
        for (const auto& info : list_families()) {
            out += info.name + "\t" + info.parameters + "\t" + info.description + "\n";
        }
        write_output("", out);
    });

    // model
    auto* model = app.add_subcommand("model", "Train, classify and evaluate classifiers");
    model->require_subcommand(1);
    ModelTrainArgs train_args;
    auto* model_train = model->add_subcommand("train", "Train a classifier");
    model_train->add_option("--arch", train_args.arch, "lstm, ngram-lr or bow-lr")->required();
    model_train->add_option("--task", train_args.task, "dga or phish")->required();
    model_train->add_option("--benign", train_args.benign, "Benign line list");
    model_train->add_option("--benign-ranking", train_args.benign_ranking,
                            "Benign rank,domain CSV");
    model_train->add_option("--benign-limit", train_args.benign_limit,
                            "Head of the ranking to keep, 0 = all");
    model_train->add_option("--malicious", train_args.malicious, "Malicious line list");
    model_train->add_option("--fractions", train_args.fractions, "train,val,test fractions");
    model_train->add_option("--out", train_args.out, "Model artifact path")->required();
    model_train->add_option("--history", train_args.history, "Training history CSV");
    model_train->add_option("--emit-test", train_args.emit_test,
                            "Write the held-out test split as label\\ttext TSV");
    model_train->add_option("--embed-dim", train_args.embed_dim, "LSTM embedding width");
    model_train->add_option("--hidden-dim", train_args.hidden_dim, "LSTM hidden width");
    model_train->add_option("--max-len", train_args.max_len,
                            "Sequence length (default 64 dga / 128 phish)");
    model_train->add_option("--dropout", train_args.dropout, "LSTM dropout rate");
    model_train->add_option("--lr", train_args.lr, "Learning rate");
    model_train->add_option("--l2", train_args.l2, "L2 penalty (linear)");
    model_train->add_option("--batch", train_args.batch, "Batch size");
    model_train->add_option("--max-epochs", train_args.max_epochs, "LSTM epoch cap");
    model_train->add_option("--patience", train_args.patience, "Early-stopping patience");
    model_train->add_option("--epochs", train_args.epochs, "Linear training epochs");
    model_train->add_flag("--bow-bigrams", train_args.bow_bigrams,
                          "Concatenate char bigrams onto the bag of words");
    model_train->add_option("--seed", train_args.seed, "Pipeline seed");
    model_train->callback([&] { run_model_train(train_args); });

    ModelClassifyArgs classify_args;
    auto* model_classify = model->add_subcommand("classify", "Score a line list");
    model_classify->add_option("--model", classify_args.model, "Model artifact")->required();
    model_classify->add_option("--input", classify_args.input, "Items to score")->required();
    model_classify->add_option("--out", classify_args.out, "score\\ttext output");
    model_classify->callback([&] { run_model_classify(classify_args); });

    ModelEvalArgs eval_args;
    auto* model_eval = model->add_subcommand("eval", "Evaluate on a labeled test set");
    model_eval->add_option("--model", eval_args.model, "Model artifact")->required();
    model_eval->add_option("--test", eval_args.test, "label\\ttext TSV")->required();
    model_eval->add_option("--roc", eval_args.roc_csv, "ROC curve CSV output");
    model_eval->add_option("--report", eval_args.report, "Report JSON output")->required();
    model_eval->add_option("--fpr-targets", eval_args.fpr_targets,
                           "Comma-separated FPR targets");
    model_eval->add_flag("--interpolate", eval_args.interpolate,
                         "Interpolated operating points");
    model_eval->callback([&] { run_model_eval(eval_args); });

    // dns
    auto* dns = app.add_subcommand("dns", "DNS tunneling detection");
    dns->require_subcommand(1);
    DnsScoreArgs dns_args;
    auto* dns_score = dns->add_subcommand("score", "Score a parsed DNS log");
    dns_score->add_option("--log", dns_args.log, "DNS query log TSV")->required();
    dns_score->add_option("--config", dns_args.config, "Scoring config JSON");
    dns_score->add_option("--out", dns_args.out, "Alerts as JSON lines")->required();
    dns_score->callback([&] { run_dns_score(dns_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error and help hint to stderr
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace botwatch
