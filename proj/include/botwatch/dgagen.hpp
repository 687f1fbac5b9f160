// Deterministic reference DGA generators: four archetypes covering the
// lexical phenotypes of bulk pseudo-random domain generation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch {

enum class DgaFamily { lcg_char, hash_hex, wordlist_concat, date_seeded };

const char* to_string(DgaFamily family);

struct DgaDate {
    int year = 0;
    int month = 0;
    int day = 0;
};

struct DgaConfig {
    DgaFamily family = DgaFamily::lcg_char;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    int length = 12;     // label length for lcg_char / hash_hex / date_seeded
    DgaDate date;        // date_seeded only
    std::string tld = "com";
};

// Exactly `count` distinct labeled-malicious domains, fully determined by
// the config. Throws when distinct output is exhausted before `count`.
std::vector<TextSample> generate_dga(const DgaConfig& config);

struct DgaFamilyInfo {
    std::string name;
    std::string parameters;
    std::string description;
};

const std::vector<DgaFamilyInfo>& list_families();

}  // namespace botwatch
