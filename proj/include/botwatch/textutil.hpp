// String normalization and small lexical helpers used across the pipeline.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace botwatch {

// Trim surrounding whitespace, lowercase, strip one trailing dot.
std::string normalize_domain(std::string_view raw);

// Trim surrounding whitespace, lowercase the entire string.
std::string normalize_url(std::string_view raw);

// Non-empty, lowercase where alphabetic, no whitespace or control chars.
bool is_clean_text(std::string_view text);

// DNS-name shape: [a-z0-9._-] labels separated by dots, each label
// non-empty and at most 63 chars.
bool is_valid_domain(std::string_view domain);

// Hostname label shape used for generated candidates: [a-z0-9-] only,
// no leading/trailing hyphen, 1..63 chars.
bool is_valid_label(std::string_view label);

std::vector<std::string> split_labels(std::string_view domain);

// Final two labels ("registered domain" approximation; multi-label public
// suffixes such as co.uk are a documented limitation).
std::string registered_domain(std::string_view qname);

// Split a registrable domain at its last dot into (sld, tld).
// tld is empty when the domain has no dot.
std::pair<std::string, std::string> split_sld_tld(std::string_view domain);

// Shannon entropy in bits per character over the byte histogram.
double shannon_entropy(std::string_view text);

bool is_consonant(char c);

// Embedded list of 30 common public suffixes, shared by the permutation
// engine and the DGA generators.
const std::vector<std::string>& common_tlds();

// RFC 3339 timestamp ("2024-01-01T00:10:00Z", optional fraction and
// numeric offset) to epoch seconds. UTC math, no locale involvement.
std::optional<std::int64_t> parse_rfc3339(std::string_view text);

}  // namespace botwatch
