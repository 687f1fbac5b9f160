// Dataset ingestion: benign rankings, line lists, DNS query logs, WHOIS
// fixture files, plus labeling, dedup and the stratified splitter.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace botwatch {

enum class SampleKind { domain, url };

struct TextSample {
    std::string text;        // normalized, lowercase, no whitespace
    int label = 0;           // 0 = benign, 1 = malicious
    SampleKind kind = SampleKind::domain;
    std::string source;      // free-form provenance tag
};

struct DatasetSplit {
    std::vector<TextSample> train;
    std::vector<TextSample> validation;
    std::vector<TextSample> test;
    std::uint64_t seed = 0;
    std::array<double, 3> fractions{};
};

enum class QueryType { A, AAAA, CNAME, MX, TXT, NULL_RR, NS, OTHER };
enum class Proto { udp, tcp };

const char* to_string(QueryType qtype);
QueryType qtype_from_string(std::string_view name);  // unknown -> OTHER

struct DnsQueryRecord {
    std::int64_t ts = 0;  // epoch milliseconds
    std::string src;
    std::string qname;    // lowercase
    QueryType qtype = QueryType::OTHER;
    Proto proto = Proto::udp;
    int src_port = 0;
    int dst_port = 0;
    std::int64_t payload_len = 0;  // bytes, >= qname length
};

struct WhoisRecord {
    std::string domain;
    std::optional<std::string> registrant_name;
    std::optional<std::string> registrant_email;
    std::optional<std::string> registrar;
    std::vector<std::string> name_servers;
    std::optional<std::int64_t> created;  // epoch seconds
};

struct SampleLoad {
    std::vector<TextSample> samples;
    std::size_t skipped = 0;
};

struct DnsLogLoad {
    std::vector<DnsQueryRecord> records;
    std::size_t rejected = 0;
};

struct WhoisLoad {
    std::vector<WhoisRecord> records;
    std::size_t skipped = 0;
};

// CSV "rank,domain" without header; ordered by ascending rank, dedup keeps
// the first occurrence, limit 0 means no limit. Malformed rows are skipped
// and counted; an unreadable file throws.
SampleLoad load_domain_ranking(const std::string& path, std::size_t limit = 0);

// One item per line; '#' comments and blank lines skipped. Lines that do not
// normalize to clean text are skipped and counted.
SampleLoad load_line_list(const std::string& path, int label, SampleKind kind);

// TSV with the exact header ts,src,qname,qtype,proto,src_port,dst_port,
// payload_len (tab separated). Rows violating field types or record
// invariants are rejected and counted; a missing header throws.
DnsLogLoad load_dns_log(const std::string& path);

// Canonical TSV form of records, header included; parse() of the result
// reproduces the rows byte-identically.
std::string serialize_dns_log(const std::vector<DnsQueryRecord>& records);

// "Key: Value" blocks separated by blank lines, from a file or every regular
// file of a directory (sorted by name). Blocks without a Domain Name are
// skipped and counted.
WhoisLoad parse_whois_fixture(const std::string& path);

// Deterministic stratified split. fractions sum to 1 (1e-9 tolerance) and
// every class must have at least one sample per non-zero fraction. The
// shuffle is splitmix64-fed Fisher-Yates, so identical inputs give
// identical splits.
DatasetSplit stratified_split(const std::vector<TextSample>& samples,
                              std::uint64_t seed,
                              const std::array<double, 3>& fractions);

struct MergeResult {
    std::vector<TextSample> samples;
    std::size_t conflicts = 0;  // texts dropped for carrying both labels
};

// Dedup within each source keeping the first occurrence; texts that appear
// across sources with conflicting labels are dropped entirely and counted.
MergeResult merge_sources(const std::vector<std::vector<TextSample>>& sources);

}  // namespace botwatch
