// Deterministic stand-in corpora for the desk-scale experiments. The sandbox
// ships no public ranking lists or URL feeds, so these generators synthesize
// benign-looking domains/URLs (well-known head + English-like tail) and
// spoof-permutation phishing URLs. Everything is seeded and reproducible.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch::testsupport {

// Benign-style domain ranking: a fixed head of well-known registrations
// followed by synthesized English-like domains. Distinct, rank order 1..n.
std::vector<std::string> benign_ranking(std::size_t count, std::uint64_t seed);

// The same list rendered as "rank,domain" CSV.
std::string benign_ranking_csv(std::size_t count, std::uint64_t seed);

// Benign-style URLs over benign hosts with ordinary content paths.
std::vector<std::string> benign_urls(std::size_t count, std::uint64_t seed);

// Phishing-style URLs: a brand host replaced by one of its spoof
// permutations, with credential-themed path tokens appended.
std::vector<std::string> phishing_urls(std::size_t count, std::uint64_t seed);

// Low-and-slow benign DNS traffic: short dictionary subdomains, mostly A
// queries, spread so each source stays at a few queries per minute.
std::vector<DnsQueryRecord> benign_dns_traffic(std::size_t sources,
                                               std::size_t queries_per_source,
                                               std::uint64_t seed);

// Tunneling traffic: long high-entropy TXT subdomains at >= `per_minute`
// queries per minute per source. Source ids are "tun-<i>".
std::vector<DnsQueryRecord> tunnel_dns_traffic(std::size_t sources, int per_minute,
                                               int minutes, std::uint64_t seed);

std::vector<TextSample> to_samples(const std::vector<std::string>& texts, int label,
                                   SampleKind kind, const std::string& source);

}  // namespace botwatch::testsupport
