#include "botwatch/dnstunnel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "botwatch/textutil.hpp"

namespace botwatch {

namespace {

using nlohmann::json;

// Suffix match on label boundaries: "google.com" covers itself and
// "mail.google.com" but not "notgoogle.com".
bool suffix_match(const std::string& qname, const std::vector<std::string>& suffixes) {
    for (const auto& suffix : suffixes) {
        if (suffix.empty() || qname.size() < suffix.size()) continue;
        if (qname.size() == suffix.size()) {
            if (qname == suffix) return true;
            continue;
        }
        const auto at = qname.size() - suffix.size();
        if (qname.compare(at, suffix.size(), suffix) == 0 && qname[at - 1] == '.') return true;
    }
    return false;
}

}  // namespace

void TunnelConfig::validate() const {
    const double sum = weights.entropy + weights.freq + weights.qname_len + weights.qtype +
                       weights.unique_chars + weights.max_run + weights.port;
    if (std::abs(sum - 1.0) > 1e-9) throw std::runtime_error("tunnel weights must sum to 1");
    const double all[] = {weights.entropy, weights.freq,  weights.qname_len, weights.qtype,
                          weights.unique_chars, weights.max_run, weights.port};
    for (const double w : all) {
        if (w < 0.0) throw std::runtime_error("tunnel weights must be non-negative");
    }
    const double caps_all[] = {caps.qname_len, caps.unique_chars, caps.max_run, caps.entropy,
                               caps.freq};
    for (const double c : caps_all) {
        if (c <= 0.0) throw std::runtime_error("tunnel caps must be positive");
    }
    if (window_secs <= 0) throw std::runtime_error("tunnel window must be positive");
    if (alert_threshold <= 0.0 || alert_threshold > 1.0) {
        throw std::runtime_error("alert threshold must be in (0, 1]");
    }
}

TunnelConfig tunnel_config_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("bad tunnel config: ") + e.what());
    }
    TunnelConfig config;
    const auto number = [](const json& node, const char* key, double fallback) {
        return node.contains(key) ? node.at(key).get<double>() : fallback;
    };
    if (doc.contains("weights")) {
        const auto& w = doc.at("weights");
        config.weights.entropy = number(w, "entropy", config.weights.entropy);
        config.weights.freq = number(w, "freq", config.weights.freq);
        config.weights.qname_len = number(w, "qname_len", config.weights.qname_len);
        config.weights.qtype = number(w, "qtype", config.weights.qtype);
        config.weights.unique_chars = number(w, "unique_chars", config.weights.unique_chars);
        config.weights.max_run = number(w, "max_run", config.weights.max_run);
        config.weights.port = number(w, "port", config.weights.port);
    }
    if (doc.contains("caps")) {
        const auto& c = doc.at("caps");
        config.caps.qname_len = number(c, "qname_len", config.caps.qname_len);
        config.caps.unique_chars = number(c, "unique_chars", config.caps.unique_chars);
        config.caps.max_run = number(c, "max_run", config.caps.max_run);
        config.caps.entropy = number(c, "entropy", config.caps.entropy);
        config.caps.freq = number(c, "freq", config.caps.freq);
    }
    if (doc.contains("window_secs")) config.window_secs = doc.at("window_secs").get<std::int64_t>();
    if (doc.contains("alert_threshold")) {
        config.alert_threshold = doc.at("alert_threshold").get<double>();
    }
    if (doc.contains("whitelist")) {
        config.whitelist = doc.at("whitelist").get<std::vector<std::string>>();
    }
    if (doc.contains("blacklist")) {
        config.blacklist = doc.at("blacklist").get<std::vector<std::string>>();
    }
    config.validate();
    return config;
}

TunnelConfig load_tunnel_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tunnel config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return tunnel_config_from_json(buffer.str());
}

std::string tunnel_config_to_json(const TunnelConfig& config) {
    const json doc{
        {"weights",
         {{"entropy", config.weights.entropy},
          {"freq", config.weights.freq},
          {"qname_len", config.weights.qname_len},
          {"qtype", config.weights.qtype},
          {"unique_chars", config.weights.unique_chars},
          {"max_run", config.weights.max_run},
          {"port", config.weights.port}}},
        {"caps",
         {{"qname_len", config.caps.qname_len},
          {"unique_chars", config.caps.unique_chars},
          {"max_run", config.caps.max_run},
          {"entropy", config.caps.entropy},
          {"freq", config.caps.freq}}},
        {"window_secs", config.window_secs},
        {"alert_threshold", config.alert_threshold},
        {"whitelist", config.whitelist},
        {"blacklist", config.blacklist}};
    return doc.dump(2) + "\n";
}

const char* to_string(TunnelVerdict verdict) {
    switch (verdict) {
        case TunnelVerdict::alert: return "alert";
        case TunnelVerdict::blacklist_forced: return "blacklist_forced";
        case TunnelVerdict::suppressed: return "suppressed";
    }
    return "unknown";
}

TunnelFeatures extract_features(const DnsQueryRecord& record, int window_freq) {
    TunnelFeatures features;
    features.payload_len = record.payload_len;
    features.freq = window_freq;
    features.qtype_flag = (record.qtype == QueryType::TXT || record.qtype == QueryType::NULL_RR ||
                           record.qtype == QueryType::CNAME)
                              ? 1
                              : 0;
    features.port_flag = record.dst_port != 53 ? 1 : 0;

    auto labels = split_labels(record.qname);
    if (labels.size() >= 2) {
        labels.resize(labels.size() - 2);  // strip the registered domain
    } else {
        features.short_name = true;  // analyzed whole
    }

    std::string analyzed;
    int consonant_run = 0, digit_run = 0;
    std::set<char> uniq;
    for (const auto& label : labels) {
        consonant_run = digit_run = 0;  // runs never span labels
        for (const char c : label) {
            analyzed += c;
            uniq.insert(c);
            consonant_run = is_consonant(c) ? consonant_run + 1 : 0;
            digit_run = (c >= '0' && c <= '9') ? digit_run + 1 : 0;
            features.max_consonants = std::max(features.max_consonants, consonant_run);
            features.max_digits = std::max(features.max_digits, digit_run);
        }
    }
    features.qname_len = static_cast<int>(analyzed.size());
    features.unique_chars = static_cast<int>(uniq.size());
    features.entropy = shannon_entropy(analyzed);
    return features;
}

std::map<std::string, double> normalized_features(const TunnelFeatures& features,
                                                  const TunnelConfig& config) {
    const auto capped = [](double value, double cap) { return std::min(value / cap, 1.0); };
    return {
        {"entropy", capped(features.entropy, config.caps.entropy)},
        {"freq", capped(features.freq, config.caps.freq)},
        {"qname_len", capped(features.qname_len, config.caps.qname_len)},
        {"qtype", static_cast<double>(features.qtype_flag)},
        {"unique_chars", capped(features.unique_chars, config.caps.unique_chars)},
        {"max_run", capped(std::max(features.max_consonants, features.max_digits),
                           config.caps.max_run)},
        {"port", static_cast<double>(features.port_flag)},
    };
}

double score_query(const TunnelFeatures& features, const TunnelConfig& config) {
    const auto norm = normalized_features(features, config);
    return config.weights.entropy * norm.at("entropy") + config.weights.freq * norm.at("freq") +
           config.weights.qname_len * norm.at("qname_len") +
           config.weights.qtype * norm.at("qtype") +
           config.weights.unique_chars * norm.at("unique_chars") +
           config.weights.max_run * norm.at("max_run") + config.weights.port * norm.at("port");
}

std::vector<TunnelAlert> detect(const std::vector<DnsQueryRecord>& records,
                                const TunnelConfig& config) {
    config.validate();
    const std::int64_t window_ms = config.window_secs * 1000;

    struct WindowKey {
        std::int64_t bucket;
        std::string src;
        std::string domain;
        bool operator<(const WindowKey& other) const {
            if (bucket != other.bucket) return bucket < other.bucket;
            if (src != other.src) return src < other.src;
            return domain < other.domain;
        }
    };
    // First pass: per-window query counts (the freq feature).
    std::map<WindowKey, int> counts;
    for (const auto& rec : records) {
        counts[WindowKey{rec.ts / window_ms, rec.src, registered_domain(rec.qname)}]++;
    }

    struct WindowState {
        double best_score = -1.0;
        std::map<std::string, double> best_norm;
        bool any_blacklisted = false;
        bool any_whitelisted = false;
    };
    std::map<WindowKey, WindowState> windows;
    for (const auto& rec : records) {
        WindowKey key{rec.ts / window_ms, rec.src, registered_domain(rec.qname)};
        auto& state = windows[key];
        const auto features = extract_features(rec, counts.at(key));
        const double score = score_query(features, config);
        if (score > state.best_score) {
            state.best_score = score;
            state.best_norm = normalized_features(features, config);
        }
        if (suffix_match(rec.qname, config.whitelist)) state.any_whitelisted = true;
        if (suffix_match(rec.qname, config.blacklist)) state.any_blacklisted = true;
    }

    std::vector<TunnelAlert> alerts;
    for (const auto& [key, state] : windows) {
        const bool over_threshold = state.best_score >= config.alert_threshold;
        if (!over_threshold && !state.any_blacklisted) continue;
        TunnelAlert alert;
        alert.src = key.src;
        alert.registered_domain = key.domain;
        alert.window_start = key.bucket * window_ms;
        alert.score = state.best_score;
        alert.contributing = state.best_norm;
        if (state.any_whitelisted) {
            alert.verdict = TunnelVerdict::suppressed;
        } else if (state.any_blacklisted) {
            alert.verdict = TunnelVerdict::blacklist_forced;
        } else {
            alert.verdict = TunnelVerdict::alert;
        }
        alerts.push_back(std::move(alert));
    }
    // map iteration is already (bucket, src, domain)-ordered
    return alerts;
}

std::string alerts_to_jsonl(const std::vector<TunnelAlert>& alerts) {
    std::string out;
    for (const auto& alert : alerts) {
        const json doc{{"src", alert.src},
                       {"registered_domain", alert.registered_domain},
                       {"window_start", alert.window_start},
                       {"score", alert.score},
                       {"features", alert.contributing},
                       {"verdict", to_string(alert.verdict)}};
        out += doc.dump();
        out += '\n';
    }
    return out;
}

}  // namespace botwatch
