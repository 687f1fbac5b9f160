#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "botwatch/corpus.hpp"
#include "botwatch/rng.hpp"
#include "botwatch/textutil.hpp"
#include "support/oracles.hpp"

using namespace botwatch;
namespace ts = botwatch::testsupport;

namespace {

std::string tmp_file(const std::string& dir, const std::string& name,
                     const std::string& content) {
    const auto path = dir + "/" + name;
    ts::write_file(path, content);
    return path;
}

}  // namespace

TEST_CASE("splitmix64 stream is deterministic") {
    SplitMix64 rng(1234567);
    const auto a = rng.next(), b = rng.next();
    SplitMix64 again(1234567);
    CHECK(again.next() == a);
    CHECK(again.next() == b);
    CHECK(a != b);
}

TEST_CASE("fnv1a64 matches the standard parameters") {
    // Published FNV-1a 64 test vectors.
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("normalize_domain") {
    CHECK(normalize_domain(" EXAMPLE.COM. ") == "example.com");
    CHECK(normalize_domain("example.com") == "example.com");
}

TEST_CASE("normalization is idempotent on fuzzed inputs") {
    SplitMix64 rng(11);
    static const char* pool =
        "ABCdefGHI.jkl-mno_pqr/:?=&@% \t0123456789..zz";
    for (int round = 0; round < 2000; ++round) {
        std::string raw;
        const auto len = rng.next_below(24);
        for (std::size_t i = 0; i < len; ++i) raw += pool[rng.next_below(44)];
        const auto domain_once = normalize_domain(raw);
        CHECK(normalize_domain(domain_once) == domain_once);
        const auto url_once = normalize_url(raw);
        CHECK(normalize_url(url_once) == url_once);
    }
}

TEST_CASE("load_domain_ranking basics") {
    const auto dir = ts::make_temp_dir("ranking");
    SUBCASE("direct parse") {
        const auto path = tmp_file(dir, "a.csv", "1,google.com\n2,youtube.com\n");
        const auto load = load_domain_ranking(path);
        REQUIRE(load.samples.size() == 2);
        CHECK(load.samples[0].text == "google.com");
        CHECK(load.samples[1].text == "youtube.com");
        CHECK(load.samples[0].label == 0);
        CHECK(load.samples[0].kind == SampleKind::domain);
    }
    SUBCASE("normalization") {
        const auto path = tmp_file(dir, "b.csv", "1,EXAMPLE.COM.\n");
        const auto load = load_domain_ranking(path);
        REQUIRE(load.samples.size() == 1);
        CHECK(load.samples[0].text == "example.com");
    }
    SUBCASE("dedup keeps first") {
        const auto path = tmp_file(dir, "c.csv", "1,a.com\n2,a.com\n3,b.com\n");
        const auto load = load_domain_ranking(path);
        REQUIRE(load.samples.size() == 2);
        CHECK(load.samples[0].text == "a.com");
        CHECK(load.samples[1].text == "b.com");
    }
    SUBCASE("rows ordered by rank even when file is not") {
        const auto path = tmp_file(dir, "d.csv", "5,z.com\n1,a.com\n");
        const auto load = load_domain_ranking(path);
        REQUIRE(load.samples.size() == 2);
        CHECK(load.samples[0].text == "a.com");
    }
    SUBCASE("malformed rows are counted, not fatal") {
        const auto path = tmp_file(dir, "e.csv", "1,good.com\nnot a row\nx,bad.com\n2,\n");
        const auto load = load_domain_ranking(path);
        CHECK(load.samples.size() == 1);
        CHECK(load.skipped == 3);
    }
    SUBCASE("limit keeps the head") {
        const auto path = tmp_file(dir, "f.csv", "1,a.com\n2,b.com\n3,c.com\n");
        CHECK(load_domain_ranking(path, 2).samples.size() == 2);
    }
    SUBCASE("unreadable file is fatal") {
        CHECK_THROWS(load_domain_ranking(dir + "/missing.csv"));
    }
}

TEST_CASE("load_line_list") {
    const auto dir = ts::make_temp_dir("lines");
    SUBCASE("comments and labels") {
        const auto path = tmp_file(dir, "a.txt", "# hdr\nhttp://a.example/x\n");
        const auto load = load_line_list(path, 1, SampleKind::url);
        REQUIRE(load.samples.size() == 1);
        CHECK(load.samples[0].text == "http://a.example/x");
        CHECK(load.samples[0].label == 1);
    }
    SUBCASE("empty file") {
        const auto path = tmp_file(dir, "b.txt", "");
        CHECK(load_line_list(path, 0, SampleKind::url).samples.empty());
    }
    SUBCASE("full lowercase normalization") {
        const auto path = tmp_file(dir, "c.txt", "HTTP://A.example/Path\n");
        const auto load = load_line_list(path, 1, SampleKind::url);
        REQUIRE(load.samples.size() == 1);
        CHECK(load.samples[0].text == "http://a.example/path");
    }
    SUBCASE("invalid domain lines counted") {
        const auto path = tmp_file(dir, "d.txt", "ok.com\nbad domain.com\n");
        const auto load = load_line_list(path, 0, SampleKind::domain);
        CHECK(load.samples.size() == 1);
        CHECK(load.skipped == 1);
    }
}

TEST_CASE("load_dns_log") {
    const auto dir = ts::make_temp_dir("dnslog");
    const std::string header = "ts\tsrc\tqname\tqtype\tproto\tsrc_port\tdst_port\tpayload_len\n";
    SUBCASE("parses a TXT row") {
        const auto path = tmp_file(
            dir, "a.tsv",
            header + "1700000000000\t10.0.0.5\tabc.example.com\tTXT\tudp\t5353\t53\t80\n");
        const auto load = load_dns_log(path);
        REQUIRE(load.records.size() == 1);
        const auto& r = load.records[0];
        CHECK(r.ts == 1700000000000);
        CHECK(r.qtype == QueryType::TXT);
        CHECK(r.proto == Proto::udp);
        CHECK(r.src_port == 5353);
        CHECK(r.payload_len == 80);
    }
    SUBCASE("unknown qtype maps to OTHER") {
        const auto path = tmp_file(dir, "b.tsv",
                                   header + "1\ts\tq.example.com\tSPF\tudp\t1\t53\t40\n");
        const auto load = load_dns_log(path);
        REQUIRE(load.records.size() == 1);
        CHECK(load.records[0].qtype == QueryType::OTHER);
    }
    SUBCASE("negative payload rejected") {
        const auto path = tmp_file(dir, "c.tsv",
                                   header + "1\ts\tq.example.com\tA\tudp\t1\t53\t-3\n");
        const auto load = load_dns_log(path);
        CHECK(load.records.empty());
        CHECK(load.rejected == 1);
    }
    SUBCASE("payload shorter than qname rejected") {
        const auto path = tmp_file(dir, "d.tsv",
                                   header + "1\ts\tq.example.com\tA\tudp\t1\t53\t5\n");
        CHECK(load_dns_log(path).rejected == 1);
    }
    SUBCASE("missing header is fatal") {
        const auto path = tmp_file(dir, "e.tsv", "1\ts\tq.example.com\tA\tudp\t1\t53\t40\n");
        CHECK_THROWS(load_dns_log(path));
    }
}

TEST_CASE("dns log round-trips canonical rows byte-identically") {
    const auto dir = ts::make_temp_dir("dnsrt");
    SplitMix64 rng(99);
    std::vector<DnsQueryRecord> records;
    static const char* names[] = {"a.example.com", "sub.domain.net", "x.y.org"};
    for (int i = 0; i < 200; ++i) {
        DnsQueryRecord rec;
        rec.ts = static_cast<std::int64_t>(rng.next_below(1ULL << 42));
        rec.src = "10.0." + std::to_string(rng.next_below(256)) + "." +
                  std::to_string(rng.next_below(256));
        rec.qname = names[rng.next_below(3)];
        rec.qtype = static_cast<QueryType>(rng.next_below(8));
        rec.proto = rng.next_below(2) ? Proto::tcp : Proto::udp;
        rec.src_port = static_cast<int>(rng.next_below(65536));
        rec.dst_port = static_cast<int>(rng.next_below(65536));
        rec.payload_len = static_cast<std::int64_t>(rec.qname.size() + rng.next_below(200));
        records.push_back(rec);
    }
    const auto canonical = serialize_dns_log(records);
    const auto path = dir + "/log.tsv";
    ts::write_file(path, canonical);
    const auto load = load_dns_log(path);
    CHECK(load.rejected == 0);
    CHECK(serialize_dns_log(load.records) == canonical);

    // rejected rows are excluded, accepted rows still byte-identical
    const std::string with_bad = canonical + "notanumber\tx\tq.com\tA\tudp\t1\t2\t30\n";
    ts::write_file(path, with_bad);
    const auto load2 = load_dns_log(path);
    CHECK(load2.rejected == 1);
    CHECK(serialize_dns_log(load2.records) == canonical);
}

TEST_CASE("parse_whois_fixture") {
    const auto dir = ts::make_temp_dir("whois");
    SUBCASE("single block") {
        const auto path = tmp_file(dir, "a.txt",
                                   "Domain Name: spoof1.com\n"
                                   "Registrant Email: x@y.z\n");
        const auto load = parse_whois_fixture(path);
        REQUIRE(load.records.size() == 1);
        CHECK(load.records[0].domain == "spoof1.com");
        REQUIRE(load.records[0].registrant_email.has_value());
        CHECK(*load.records[0].registrant_email == "x@y.z");
    }
    SUBCASE("repeated name servers") {
        const auto path = tmp_file(dir, "b.txt",
                                   "Domain Name: a.com\n"
                                   "Name Server: ns1.example.net\n"
                                   "Name Server: ns2.example.net\n");
        const auto load = parse_whois_fixture(path);
        REQUIRE(load.records.size() == 1);
        CHECK(load.records[0].name_servers.size() == 2);
    }
    SUBCASE("block without domain name skipped") {
        const auto path = tmp_file(dir, "c.txt",
                                   "Registrar: Foo\n\nDomain Name: keep.com\n");
        const auto load = parse_whois_fixture(path);
        CHECK(load.records.size() == 1);
        CHECK(load.skipped == 1);
    }
    SUBCASE("creation date RFC 3339") {
        const auto path = tmp_file(dir, "d.txt",
                                   "Domain Name: a.com\n"
                                   "Creation Date: 2024-01-01T00:10:00Z\n");
        const auto load = parse_whois_fixture(path);
        REQUIRE(load.records[0].created.has_value());
        CHECK(*load.records[0].created == 1704067800);
    }
    SUBCASE("directory input concatenates files") {
        const auto sub = ts::make_temp_dir("whoisdir");
        tmp_file(sub, "1.txt", "Domain Name: a.com\n");
        tmp_file(sub, "2.txt", "Domain Name: b.com\n");
        CHECK(parse_whois_fixture(sub).records.size() == 2);
    }
}

TEST_CASE("rfc3339 offsets and rejects") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_rfc3339("1970-01-01T01:00:00+01:00") == 0);
    CHECK(parse_rfc3339("2024-01-01T00:10:00.5Z") == 1704067800);
    CHECK_FALSE(parse_rfc3339("not a date").has_value());
    CHECK_FALSE(parse_rfc3339("2024-13-01T00:00:00Z").has_value());
}

namespace {

std::vector<TextSample> make_samples(std::size_t n0, std::size_t n1) {
    std::vector<TextSample> samples;
    for (std::size_t i = 0; i < n0; ++i) {
        samples.push_back(
            TextSample{"benign" + std::to_string(i) + ".com", 0, SampleKind::domain, "t"});
    }
    for (std::size_t i = 0; i < n1; ++i) {
        samples.push_back(
            TextSample{"evil" + std::to_string(i) + ".com", 1, SampleKind::domain, "t"});
    }
    return samples;
}

std::multiset<std::string> texts_of(const std::vector<TextSample>& v) {
    std::multiset<std::string> out;
    for (const auto& s : v) out.insert(s.text);
    return out;
}

}  // namespace

TEST_CASE("stratified_split sizes and stratification") {
    const auto samples = make_samples(5, 5);
    const auto split = stratified_split(samples, 7, {0.8, 0.1, 0.1});
    CHECK(split.train.size() == 8);
    CHECK(split.validation.size() == 1);
    CHECK(split.test.size() == 1);
    const auto count_label = [](const std::vector<TextSample>& v, int label) {
        return std::count_if(v.begin(), v.end(),
                             [label](const TextSample& s) { return s.label == label; });
    };
    CHECK(count_label(split.train, 0) == 4);
    CHECK(count_label(split.train, 1) == 4);
    CHECK(count_label(split.validation, 0) <= 1);
    CHECK(count_label(split.validation, 1) <= 1);
    CHECK(count_label(split.test, 0) <= 1);
    CHECK(count_label(split.test, 1) <= 1);
}

TEST_CASE("stratified_split determinism and degenerate fractions") {
    const auto samples = make_samples(20, 10);
    const auto a = stratified_split(samples, 42, {0.8, 0.1, 0.1});
    const auto b = stratified_split(samples, 42, {0.8, 0.1, 0.1});
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i) {
        CHECK(a.train[i].text == b.train[i].text);
    }

    const auto all_train = stratified_split(samples, 1, {1.0, 0.0, 0.0});
    CHECK(all_train.train.size() == samples.size());
    CHECK(all_train.validation.empty());
    CHECK(all_train.test.empty());
}

TEST_CASE("stratified_split rejects bad inputs") {
    const auto samples = make_samples(4, 1);
    CHECK_THROWS(stratified_split(samples, 1, {0.5, 0.4, 0.2}));  // sums to 1.1
    CHECK_THROWS(stratified_split(samples, 1, {0.8, 0.1, 0.1}));  // class 1 too small
    CHECK_NOTHROW(stratified_split(samples, 1, {1.0, 0.0, 0.0}));
}

TEST_CASE("stratified_split partition property on fuzzed inputs") {
    SplitMix64 rng(2024);
    for (int round = 0; round < 1000; ++round) {
        const auto n0 = 3 + rng.next_below(40);
        const auto n1 = 3 + rng.next_below(40);
        auto samples = make_samples(n0, n1);
        const double f0 = 0.5 + 0.4 * rng.next_unit();
        const double f1 = (1.0 - f0) * rng.next_unit();
        const std::array<double, 3> fractions{f0, f1, 1.0 - f0 - f1};
        const auto split = stratified_split(samples, rng.next(), fractions);

        auto joined = texts_of(split.train);
        for (const auto& s : split.validation) joined.insert(s.text);
        for (const auto& s : split.test) joined.insert(s.text);
        CHECK(joined == texts_of(samples));  // union equals input, no duplicates
    }
}

TEST_CASE("merge_sources dedup and conflict policy") {
    std::vector<TextSample> a = {{"x.com", 0, SampleKind::domain, "a"},
                                 {"x.com", 0, SampleKind::domain, "a"},
                                 {"y.com", 0, SampleKind::domain, "a"}};
    std::vector<TextSample> b = {{"y.com", 1, SampleKind::domain, "b"},
                                 {"z.com", 1, SampleKind::domain, "b"}};
    const auto merged = merge_sources({a, b});
    CHECK(merged.conflicts == 1);  // y.com carries both labels -> dropped
    REQUIRE(merged.samples.size() == 2);
    CHECK(merged.samples[0].text == "x.com");
    CHECK(merged.samples[1].text == "z.com");
}
