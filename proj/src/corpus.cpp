#include "botwatch/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "botwatch/rng.hpp"
#include "botwatch/textutil.hpp"

namespace botwatch {

namespace {

constexpr std::int64_t kEpoch1990 = 631152000;  // 1990-01-01T00:00:00Z

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

// getline tolerating CRLF.
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            fields.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

const char* to_string(QueryType qtype) {
    switch (qtype) {
        case QueryType::A: return "A";
        case QueryType::AAAA: return "AAAA";
        case QueryType::CNAME: return "CNAME";
        case QueryType::MX: return "MX";
        case QueryType::TXT: return "TXT";
        case QueryType::NULL_RR: return "NULL";
        case QueryType::NS: return "NS";
        case QueryType::OTHER: return "OTHER";
    }
    return "OTHER";
}

QueryType qtype_from_string(std::string_view name) {
    if (name == "A") return QueryType::A;
    if (name == "AAAA") return QueryType::AAAA;
    if (name == "CNAME") return QueryType::CNAME;
    if (name == "MX") return QueryType::MX;
    if (name == "TXT") return QueryType::TXT;
    if (name == "NULL") return QueryType::NULL_RR;
    if (name == "NS") return QueryType::NS;
    return QueryType::OTHER;
}

SampleLoad load_domain_ranking(const std::string& path, std::size_t limit) {
    auto in = open_or_throw(path);
    SampleLoad out;
    std::vector<std::pair<std::int64_t, std::string>> rows;
    std::string line;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_on(line, ',');
        std::int64_t rank = 0;
        if (fields.size() != 2 || !parse_number(fields[0], rank)) {
            ++out.skipped;
            continue;
        }
        const std::string domain = normalize_domain(fields[1]);
        if (!is_valid_domain(domain)) {
            ++out.skipped;
            continue;
        }
        rows.emplace_back(rank, domain);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::unordered_set<std::string> seen;
    for (auto& [rank, domain] : rows) {
        if (!seen.insert(domain).second) continue;
        out.samples.push_back(TextSample{std::move(domain), 0, SampleKind::domain, path});
        if (limit != 0 && out.samples.size() >= limit) break;
    }
    return out;
}

SampleLoad load_line_list(const std::string& path, int label, SampleKind kind) {
    auto in = open_or_throw(path);
    SampleLoad out;
    std::string line;
    while (read_line(in, line)) {
        std::string item = kind == SampleKind::domain ? normalize_domain(line)
                                                      : normalize_url(line);
        if (item.empty()) continue;
        if (item[0] == '#') continue;
        if (!is_clean_text(item) ||
            (kind == SampleKind::domain && !is_valid_domain(item))) {
            ++out.skipped;
            continue;
        }
        out.samples.push_back(TextSample{std::move(item), label, kind, path});
    }
    return out;
}

DnsLogLoad load_dns_log(const std::string& path) {
    auto in = open_or_throw(path);
    std::string line;
    if (!read_line(in, line) ||
        line != "ts\tsrc\tqname\tqtype\tproto\tsrc_port\tdst_port\tpayload_len") {
        throw std::runtime_error("dns log missing expected header: " + path);
    }
    DnsLogLoad out;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        const auto f = split_on(line, '\t');
        DnsQueryRecord rec;
        if (f.size() != 8 || !parse_number(f[0], rec.ts) ||
            !parse_number(f[5], rec.src_port) || !parse_number(f[6], rec.dst_port) ||
            !parse_number(f[7], rec.payload_len)) {
            ++out.rejected;
            continue;
        }
        rec.src = f[1];
        rec.qname = normalize_domain(f[2]);
        rec.qtype = qtype_from_string(f[3]);
        if (f[4] == "udp") {
            rec.proto = Proto::udp;
        } else if (f[4] == "tcp") {
            rec.proto = Proto::tcp;
        } else {
            ++out.rejected;
            continue;
        }
        const bool ports_ok = rec.src_port >= 0 && rec.src_port <= 65535 &&
                              rec.dst_port >= 0 && rec.dst_port <= 65535;
        if (!ports_ok || rec.qname.empty() ||
            rec.payload_len < static_cast<std::int64_t>(rec.qname.size())) {
            ++out.rejected;
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

std::string serialize_dns_log(const std::vector<DnsQueryRecord>& records) {
    std::string out = "ts\tsrc\tqname\tqtype\tproto\tsrc_port\tdst_port\tpayload_len\n";
    for (const auto& r : records) {
        out += std::to_string(r.ts);
        out += '\t';
        out += r.src;
        out += '\t';
        out += r.qname;
        out += '\t';
        out += to_string(r.qtype);
        out += '\t';
        out += r.proto == Proto::udp ? "udp" : "tcp";
        out += '\t';
        out += std::to_string(r.src_port);
        out += '\t';
        out += std::to_string(r.dst_port);
        out += '\t';
        out += std::to_string(r.payload_len);
        out += '\n';
    }
    return out;
}

namespace {

void flush_whois_block(std::map<std::string, std::vector<std::string>>& block,
                       WhoisLoad& out) {
    if (block.empty()) return;
    const auto dom = block.find("domain name");
    if (dom == block.end() || dom->second.empty()) {
        ++out.skipped;
        block.clear();
        return;
    }
    WhoisRecord rec;
    rec.domain = normalize_domain(dom->second.front());
    const auto first_of = [&block](const char* key) -> std::optional<std::string> {
        const auto it = block.find(key);
        if (it == block.end() || it->second.empty()) return std::nullopt;
        return it->second.front();
    };
    rec.registrant_name = first_of("registrant name");
    rec.registrant_email = first_of("registrant email");
    rec.registrar = first_of("registrar");
    if (const auto it = block.find("name server"); it != block.end()) {
        rec.name_servers = it->second;
    }
    if (const auto created = first_of("creation date")) {
        const auto epoch = parse_rfc3339(*created);
        if (epoch && *epoch > kEpoch1990) rec.created = *epoch;
    }
    out.records.push_back(std::move(rec));
    block.clear();
}

void parse_whois_stream(std::istream& in, WhoisLoad& out) {
    std::map<std::string, std::vector<std::string>> block;
    std::string line;
    while (read_line(in, line)) {
        const auto colon = line.find(':');
        if (line.find_first_not_of(" \t") == std::string::npos) {
            flush_whois_block(block, out);
            continue;
        }
        if (colon == std::string::npos) continue;  // unrecognized line shape
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        // keys matched case-insensitively, values kept verbatim (trimmed)
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const auto kb = key.find_first_not_of(" \t");
        const auto ke = key.find_last_not_of(" \t");
        key = kb == std::string::npos ? std::string() : key.substr(kb, ke - kb + 1);
        const auto vb = value.find_first_not_of(" \t");
        const auto ve = value.find_last_not_of(" \t");
        value = vb == std::string::npos ? std::string() : value.substr(vb, ve - vb + 1);
        if (key.empty() || value.empty()) continue;
        block[key].push_back(value);
    }
    flush_whois_block(block, out);
}

}  // namespace

WhoisLoad parse_whois_fixture(const std::string& path) {
    WhoisLoad out;
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            auto in = open_or_throw(file.string());
            parse_whois_stream(in, out);
        }
        return out;
    }
    auto in = open_or_throw(path);
    parse_whois_stream(in, out);
    return out;
}

DatasetSplit stratified_split(const std::vector<TextSample>& samples,
                              std::uint64_t seed,
                              const std::array<double, 3>& fractions) {
    double total = 0.0;
    int nonzero = 0;
    for (const double f : fractions) {
        if (f < 0.0) throw std::runtime_error("split fraction must be non-negative");
        total += f;
        if (f > 0.0) ++nonzero;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::runtime_error("split fractions must sum to 1");
    }

    // Classes processed in label order; one shuffle stream for both.
    std::map<int, std::vector<TextSample>> by_class;
    for (const auto& s : samples) by_class[s.label].push_back(s);
    for (const auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(nonzero)) {
            std::ostringstream msg;
            msg << "class " << label << " has " << members.size()
                << " samples, fewer than the " << nonzero << " non-zero fractions";
            throw std::runtime_error(msg.str());
        }
    }

    DatasetSplit split;
    split.seed = seed;
    split.fractions = fractions;
    SplitMix64 rng(seed);
    // Largest-remainder apportionment with carry across classes, so the
    // overall split sizes track the fractions even when single classes
    // cannot be divided evenly.
    std::array<double, 3> carry{0.0, 0.0, 0.0};
    for (auto& [label, members] : by_class) {
        fisher_yates_shuffle(members, rng);
        const auto m = members.size();
        std::array<double, 3> target;
        std::array<std::size_t, 3> alloc;
        std::size_t assigned = 0;
        for (int i = 0; i < 3; ++i) {
            target[i] = fractions[i] * static_cast<double>(m) + carry[i];
            alloc[i] = static_cast<std::size_t>(std::max(0.0, std::floor(target[i])));
            assigned += alloc[i];
        }
        while (assigned < m) {
            int best = -1;
            double best_frac = -1.0;
            for (int i = 0; i < 3; ++i) {
                if (fractions[i] == 0.0) continue;
                const double frac = target[i] - static_cast<double>(alloc[i]);
                if (frac > best_frac + 1e-12) {
                    best_frac = frac;
                    best = i;
                }
            }
            ++alloc[best];
            ++assigned;
        }
        while (assigned > m) {  // floor overshoot from negative carry
            for (int i = 2; i >= 0 && assigned > m; --i) {
                if (alloc[i] > 0) {
                    --alloc[i];
                    --assigned;
                }
            }
        }
        for (int i = 0; i < 3; ++i) carry[i] = target[i] - static_cast<double>(alloc[i]);

        std::size_t offset = 0;
        const auto take = [&](std::vector<TextSample>& dest, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) dest.push_back(members[offset + i]);
            offset += n;
        };
        take(split.train, alloc[0]);
        take(split.validation, alloc[1]);
        take(split.test, alloc[2]);
    }
    return split;
}

MergeResult merge_sources(const std::vector<std::vector<TextSample>>& sources) {
    MergeResult out;
    std::unordered_map<std::string, int> label_of;  // first label seen per text
    std::unordered_set<std::string> conflicted;
    for (const auto& source : sources) {
        std::unordered_set<std::string> seen_here;
        for (const auto& sample : source) {
            if (!seen_here.insert(sample.text).second) continue;  // dup within source
            const auto it = label_of.find(sample.text);
            if (it == label_of.end()) {
                label_of.emplace(sample.text, sample.label);
                out.samples.push_back(sample);
            } else if (it->second != sample.label) {
                conflicted.insert(sample.text);
            }
        }
    }
    if (!conflicted.empty()) {
        out.conflicts = conflicted.size();
        std::vector<TextSample> kept;
        kept.reserve(out.samples.size());
        for (auto& sample : out.samples) {
            if (!conflicted.count(sample.text)) kept.push_back(std::move(sample));
        }
        out.samples = std::move(kept);
    }
    return out;
}

}  // namespace botwatch
