// DNS tunneling detection: per-query payload features and per-source
// frequency, combined by capped weighted scoring with whitelist/blacklist
// post-filtering.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch {

struct TunnelFeatures {
    int qname_len = 0;       // characters of the analyzed part, dots excluded
    int unique_chars = 0;
    int max_consonants = 0;  // longest consonant run, runs do not cross labels
    int max_digits = 0;
    double entropy = 0.0;    // bits/char over the analyzed part, dots excluded
    std::int64_t payload_len = 0;
    int freq = 0;            // queries from this src to this registered domain in-window
    int qtype_flag = 0;      // qtype in {TXT, NULL, CNAME}
    int port_flag = 0;       // dst_port != 53
    bool short_name = false; // qname had < 2 labels; features cover the full qname
};

struct TunnelWeights {
    double entropy = 0.25;
    double freq = 0.20;
    double qname_len = 0.15;
    double qtype = 0.15;
    double unique_chars = 0.10;
    double max_run = 0.10;  // max(consonant run, digit run)
    double port = 0.05;
};

struct TunnelCaps {
    double qname_len = 40.0;
    double unique_chars = 20.0;
    double max_run = 8.0;
    double entropy = 4.0;
    double freq = 60.0;
};

struct TunnelConfig {
    TunnelWeights weights;
    TunnelCaps caps;
    std::int64_t window_secs = 60;
    double alert_threshold = 0.5;
    std::vector<std::string> whitelist;  // domain suffixes
    std::vector<std::string> blacklist;

    void validate() const;  // throws on weight/cap violations
};

TunnelConfig tunnel_config_from_json(const std::string& json_text);
TunnelConfig load_tunnel_config(const std::string& path);
std::string tunnel_config_to_json(const TunnelConfig& config);

enum class TunnelVerdict { alert, blacklist_forced, suppressed };
const char* to_string(TunnelVerdict verdict);

struct TunnelAlert {
    std::string src;
    std::string registered_domain;
    std::int64_t window_start = 0;  // epoch ms
    double score = 0.0;
    std::map<std::string, double> contributing;  // normalized feature values
    TunnelVerdict verdict = TunnelVerdict::alert;
};

// Features over the qname with the final two labels removed; a qname with
// fewer than two labels is analyzed whole and flagged.
TunnelFeatures extract_features(const DnsQueryRecord& record, int window_freq);

// Normalized contribution per feature: min(value/cap, 1), flags pass through.
std::map<std::string, double> normalized_features(const TunnelFeatures& features,
                                                  const TunnelConfig& config);

// Weighted sum of the normalized features, in [0, 1].
double score_query(const TunnelFeatures& features, const TunnelConfig& config);

// Tumbling-window aggregation per (src, registered domain); emits at most
// one alert per window key, ordered by window start. Whitelist wins over
// blacklist; blacklist wins over the threshold.
std::vector<TunnelAlert> detect(const std::vector<DnsQueryRecord>& records,
                                const TunnelConfig& config);

std::string alerts_to_jsonl(const std::vector<TunnelAlert>& alerts);

}  // namespace botwatch
