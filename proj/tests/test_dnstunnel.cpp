#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "botwatch/dnstunnel.hpp"
#include "botwatch/rng.hpp"
#include "botwatch/textutil.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace botwatch;
namespace ts = botwatch::testsupport;

namespace {

DnsQueryRecord query(const std::string& qname, QueryType qtype = QueryType::A,
                     int dst_port = 53, std::int64_t ts = 1700000000000) {
    DnsQueryRecord rec;
    rec.ts = ts;
    rec.src = "10.0.0.1";
    rec.qname = qname;
    rec.qtype = qtype;
    rec.src_port = 40000;
    rec.dst_port = dst_port;
    rec.payload_len = static_cast<std::int64_t>(qname.size()) + 30;
    return rec;
}

}  // namespace

TEST_CASE("extract_features payload analysis") {
    SUBCASE("single-symbol subdomain has zero entropy") {
        const auto f = extract_features(query("aaaaaa.example.com"), 1);
        CHECK(f.entropy == doctest::Approx(0.0));
        CHECK(f.qname_len == 6);
        CHECK(f.unique_chars == 1);
    }
    SUBCASE("four uniform symbols have two bits") {
        const auto f = extract_features(query("abcd.example.com"), 1);
        CHECK(f.entropy == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("hand-enumerated mail.google.com") {
        const auto f = extract_features(query("mail.google.com"), 1);
        CHECK(f.qname_len == 4);
        CHECK(f.max_consonants == 1);
        CHECK(f.max_digits == 0);
        CHECK(f.unique_chars == 4);
        CHECK(f.short_name == false);
    }
    SUBCASE("registered domain is excluded from the analyzed part") {
        const auto f = extract_features(query("google.com"), 1);
        CHECK(f.qname_len == 0);
        CHECK(f.entropy == doctest::Approx(0.0));
    }
    SUBCASE("single-label qname is analyzed whole and flagged") {
        const auto f = extract_features(query("abc123"), 1);
        CHECK(f.short_name);
        CHECK(f.qname_len == 6);
        CHECK(f.max_digits == 3);
    }
    SUBCASE("digit and consonant runs") {
        const auto f = extract_features(query("xyz99a.example.com"), 1);
        CHECK(f.max_consonants == 3);
        CHECK(f.max_digits == 2);
    }
    SUBCASE("runs do not cross label boundaries") {
        const auto f = extract_features(query("bc.df.example.com"), 1);
        CHECK(f.max_consonants == 2);
    }
    SUBCASE("qtype and port flags") {
        CHECK(extract_features(query("a.b.c", QueryType::TXT), 1).qtype_flag == 1);
        CHECK(extract_features(query("a.b.c", QueryType::NULL_RR), 1).qtype_flag == 1);
        CHECK(extract_features(query("a.b.c", QueryType::CNAME), 1).qtype_flag == 1);
        CHECK(extract_features(query("a.b.c", QueryType::A), 1).qtype_flag == 0);
        CHECK(extract_features(query("a.b.c", QueryType::A, 5353), 1).port_flag == 1);
    }
    SUBCASE("entropy matches the brute-force oracle on random strings") {
        SplitMix64 rng(8);
        static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
        for (int round = 0; round < 1000; ++round) {
            std::string sub;
            const auto len = 1 + rng.next_below(30);
            for (std::size_t i = 0; i < len; ++i) sub += alphabet[rng.next_below(36)];
            const auto f = extract_features(query(sub + ".example.com"), 1);
            CHECK(f.entropy == doctest::Approx(ts::entropy_oracle(sub)).epsilon(1e-12));
        }
    }
}

TEST_CASE("score_query") {
    const TunnelConfig config;
    SUBCASE("all-zero features score zero") {
        TunnelFeatures f;
        CHECK(score_query(f, config) == doctest::Approx(0.0));
    }
    SUBCASE("saturated features and both flags score exactly one") {
        TunnelFeatures f;
        f.qname_len = 100;
        f.unique_chars = 36;
        f.max_consonants = 20;
        f.max_digits = 3;
        f.entropy = 5.0;
        f.freq = 500;
        f.qtype_flag = 1;
        f.port_flag = 1;
        CHECK(score_query(f, config) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("a lone TXT flag contributes exactly its weight") {
        TunnelFeatures f;
        f.qtype_flag = 1;
        CHECK(score_query(f, config) == doctest::Approx(0.15).epsilon(1e-12));
    }
    SUBCASE("monotone non-decreasing in every feature") {
        SplitMix64 rng(21);
        for (int round = 0; round < 500; ++round) {
            TunnelFeatures f;
            f.qname_len = static_cast<int>(rng.next_below(60));
            f.unique_chars = static_cast<int>(rng.next_below(30));
            f.max_consonants = static_cast<int>(rng.next_below(12));
            f.max_digits = static_cast<int>(rng.next_below(12));
            f.entropy = 5.0 * rng.next_unit();
            f.freq = static_cast<int>(rng.next_below(100));
            f.qtype_flag = static_cast<int>(rng.next_below(2));
            f.port_flag = static_cast<int>(rng.next_below(2));
            const double base = score_query(f, config);

            auto bump = f;
            switch (rng.next_below(8)) {
                case 0: bump.qname_len += 1 + static_cast<int>(rng.next_below(5)); break;
                case 1: bump.unique_chars += 1; break;
                case 2: bump.max_consonants += 2; break;
                case 3: bump.max_digits += 2; break;
                case 4: bump.entropy += 0.5; break;
                case 5: bump.freq += 10; break;
                case 6: bump.qtype_flag = 1; break;
                default: bump.port_flag = 1; break;
            }
            CHECK(score_query(bump, config) >= base - 1e-15);
        }
    }
}

TEST_CASE("config json round trip and validation") {
    TunnelConfig config;
    config.whitelist = {"corp.example"};
    config.blacklist = {"evil.net"};
    const auto text = tunnel_config_to_json(config);
    const auto parsed = tunnel_config_from_json(text);
    CHECK(parsed.alert_threshold == config.alert_threshold);
    CHECK(parsed.whitelist == config.whitelist);
    CHECK(parsed.caps.entropy == config.caps.entropy);

    CHECK_THROWS(tunnel_config_from_json(R"({"weights":{"entropy":0.9}})"));  // sum != 1
    CHECK_THROWS(tunnel_config_from_json(R"({"caps":{"freq":0}})"));
    CHECK_THROWS(tunnel_config_from_json("not json"));
    CHECK_THROWS(tunnel_config_from_json(R"({"alert_threshold":0})"));
}

namespace {

std::string long_random_sub(SplitMix64& rng, int len) {
    static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string out;
    for (int i = 0; i < len; ++i) out += alphabet[rng.next_below(36)];
    return out;
}

}  // namespace

TEST_CASE("detect verdict precedence and windowing") {
    TunnelConfig config;
    config.whitelist = {"trusted.com"};
    config.blacklist = {"evil.net"};
    SplitMix64 rng(3);

    SUBCASE("whitelisted domain with saturated features is suppressed") {
        std::vector<DnsQueryRecord> records;
        for (int i = 0; i < 120; ++i) {
            auto rec = query(long_random_sub(rng, 45) + ".trusted.com", QueryType::TXT, 53,
                             1700000000000 + i * 400);
            records.push_back(rec);
        }
        const auto alerts = detect(records, config);
        REQUIRE_FALSE(alerts.empty());
        for (const auto& alert : alerts) {
            CHECK(alert.verdict == TunnelVerdict::suppressed);
            CHECK(alert.registered_domain == "trusted.com");
        }
    }
    SUBCASE("blacklisted domain with zero features is forced") {
        const auto alerts = detect({query("a.evil.net")}, config);
        REQUIRE(alerts.size() == 1);
        CHECK(alerts[0].verdict == TunnelVerdict::blacklist_forced);
        CHECK(alerts[0].score < config.alert_threshold);
    }
    SUBCASE("whitelist wins when both lists match") {
        TunnelConfig both = config;
        both.whitelist = {"both.org"};
        both.blacklist = {"both.org"};
        const auto alerts = detect({query("x.both.org")}, both);
        REQUIRE(alerts.size() == 1);
        CHECK(alerts[0].verdict == TunnelVerdict::suppressed);
    }
    SUBCASE("high-rate high-entropy TXT stream alerts") {
        std::vector<DnsQueryRecord> records;
        for (int i = 0; i < 200; ++i) {  // 200 queries within one minute
            records.push_back(query(long_random_sub(rng, 50) + ".exfil.org", QueryType::TXT, 53,
                                    1700000000000 + i * 250));
        }
        const auto alerts = detect(records, config);
        REQUIRE_FALSE(alerts.empty());
        bool alerted = false;
        for (const auto& alert : alerts) {
            if (alert.verdict == TunnelVerdict::alert) {
                alerted = true;
                CHECK(alert.score >= 0.7);
                CHECK(alert.registered_domain == "exfil.org");
            }
        }
        CHECK(alerted);
    }
    SUBCASE("at most one alert per (src, domain, window)") {
        std::vector<DnsQueryRecord> records;
        for (int i = 0; i < 300; ++i) {
            records.push_back(query(long_random_sub(rng, 50) + ".exfil.org", QueryType::TXT, 53,
                                    1700000000000 + i * 600));  // spans 3 windows
        }
        const auto alerts = detect(records, config);
        std::set<std::tuple<std::string, std::string, std::int64_t>> keys;
        for (const auto& alert : alerts) {
            CHECK(keys.emplace(alert.src, alert.registered_domain, alert.window_start).second);
        }
        CHECK(alerts.size() >= 2);
    }
    SUBCASE("alerts come out ordered by window start") {
        std::vector<DnsQueryRecord> records;
        for (int i = 0; i < 100; ++i) {
            records.push_back(query(long_random_sub(rng, 50) + ".exfil.org", QueryType::TXT, 53,
                                    1700000500000 - i * 1300));
        }
        const auto alerts = detect(records, config);
        REQUIRE(alerts.size() >= 2);
        for (std::size_t i = 1; i < alerts.size(); ++i) {
            CHECK(alerts[i - 1].window_start <= alerts[i].window_start);
        }
    }
    SUBCASE("invariant: alert verdict implies score at threshold") {
        const auto benign = ts::benign_dns_traffic(50, 40, 99);
        auto mixed = benign;
        for (int i = 0; i < 150; ++i) {
            mixed.push_back(query(long_random_sub(rng, 48) + ".exfil.org", QueryType::TXT, 53,
                                  1700000000000 + i * 350));
        }
        for (const auto& alert : detect(mixed, config)) {
            if (alert.verdict == TunnelVerdict::alert) {
                CHECK(alert.score >= config.alert_threshold);
            }
        }
    }
}

TEST_CASE("alerts_to_jsonl emits one object per alert") {
    TunnelConfig config;
    SplitMix64 rng(5);
    std::vector<DnsQueryRecord> records;
    for (int i = 0; i < 80; ++i) {
        records.push_back(query(long_random_sub(rng, 50) + ".exfil.org", QueryType::TXT, 53,
                                1700000000000 + i * 700));
    }
    const auto alerts = detect(records, config);
    REQUIRE_FALSE(alerts.empty());
    const auto jsonl = alerts_to_jsonl(alerts);
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == static_cast<long>(alerts.size()));
    CHECK(jsonl.find("\"verdict\":\"alert\"") != std::string::npos);
    CHECK(jsonl.find("\"registered_domain\":\"exfil.org\"") != std::string::npos);
}
