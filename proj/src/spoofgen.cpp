#include "botwatch/spoofgen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "botwatch/textutil.hpp"

namespace botwatch {

namespace {

// QWERTY neighbour map, letters and digit row.
const std::map<char, std::string>& keyboard_adjacent() {
    static const std::map<char, std::string> table = {
        {'1', "2q"},     {'2', "3wq1"},   {'3', "4ew2"},  {'4', "5re3"},
        {'5', "6tr4"},   {'6', "7yt5"},   {'7', "8uy6"},  {'8', "9iu7"},
        {'9', "0oi8"},   {'0', "po9"},    {'q', "12wa"},  {'w', "3esaq2"},
        {'e', "4rdsw3"}, {'r', "5tfde4"}, {'t', "6ygfr5"},{'y', "7uhgt6"},
        {'u', "8ijhy7"}, {'i', "9okju8"}, {'o', "0plki9"},{'p', "lo0"},
        {'a', "qwsz"},   {'s', "edxzaw"}, {'d', "rfcxse"},{'f', "tgvcdr"},
        {'g', "yhbvft"}, {'h', "ujnbgy"}, {'j', "ikmnhu"},{'k', "olmji"},
        {'l', "kop"},    {'z', "asx"},    {'x', "zsdc"},  {'c', "xdfv"},
        {'v', "cfgb"},   {'b', "vghn"},   {'n', "bhjm"},  {'m', "njk"}};
    return table;
}

// Visually confusable ASCII substitutions.
const std::vector<std::pair<char, std::string>>& homoglyph_table() {
    static const std::vector<std::pair<char, std::string>> table = {
        {'o', "0"}, {'l', "1"}, {'i', "1"}, {'e', "3"}, {'a', "4"},
        {'s', "5"}, {'b', "8"}, {'g', "9"}, {'m', "rn"}, {'w', "vv"}};
    return table;
}

constexpr std::string_view kVowels = "aeiou";

bool label_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

// Every label of the candidate must be syntactically valid.
bool valid_candidate(const std::string& domain) {
    for (const auto& label : split_labels(domain)) {
        if (!is_valid_label(label)) return false;
    }
    return true;
}

struct Emitter {
    const std::string& origin;
    const std::string& tld;
    std::set<std::pair<int, std::string>> seen;
    std::vector<Permutation>* out;

    void sld(FuzzTechnique technique, const std::string& candidate_sld) {
        full(technique, tld.empty() ? candidate_sld : candidate_sld + "." + tld);
    }

    void full(FuzzTechnique technique, const std::string& candidate) {
        if (candidate == origin) return;
        if (!valid_candidate(candidate)) return;
        if (!seen.emplace(static_cast<int>(technique), candidate).second) return;
        out->push_back(Permutation{technique, candidate, origin});
    }
};

void gen_addition(const std::string& sld, Emitter& emit) {
    static const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789";
    for (const char c : chars) emit.sld(FuzzTechnique::addition, sld + c);
}

void gen_bitsquatting(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        for (int bit = 0; bit < 8; ++bit) {
            char flipped = static_cast<char>(sld[i] ^ (1 << bit));
            if (flipped >= 'A' && flipped <= 'Z') flipped = static_cast<char>(flipped + 32);
            if (!label_char(flipped) || flipped == sld[i]) continue;
            std::string candidate = sld;
            candidate[i] = flipped;
            emit.sld(FuzzTechnique::bitsquatting, candidate);
        }
    }
}

void gen_homoglyph(const std::string& sld, Emitter& emit) {
    for (const auto& [from, to] : homoglyph_table()) {
        for (std::size_t i = 0; i < sld.size(); ++i) {
            if (sld[i] != from) continue;
            std::string candidate = sld.substr(0, i) + to + sld.substr(i + 1);
            emit.sld(FuzzTechnique::homoglyph, candidate);
        }
    }
}

void gen_pair_insert(const std::string& sld, FuzzTechnique technique, char sep,
                     Emitter& emit) {
    for (std::size_t i = 1; i < sld.size(); ++i) {
        std::string candidate = sld.substr(0, i) + sep + sld.substr(i);
        if (technique == FuzzTechnique::subdomain) {
            emit.full(technique, emit.tld.empty() ? candidate
                                                  : candidate + "." + emit.tld);
        } else {
            emit.sld(technique, candidate);
        }
    }
}

void gen_insertion(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        const auto it = keyboard_adjacent().find(sld[i]);
        if (it == keyboard_adjacent().end()) continue;
        for (const char c : it->second) {
            emit.sld(FuzzTechnique::insertion, sld.substr(0, i) + c + sld.substr(i));
            emit.sld(FuzzTechnique::insertion, sld.substr(0, i + 1) + c + sld.substr(i + 1));
        }
    }
}

void gen_omission(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        emit.sld(FuzzTechnique::omission, sld.substr(0, i) + sld.substr(i + 1));
    }
}

void gen_repetition(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        emit.sld(FuzzTechnique::repetition, sld.substr(0, i + 1) + sld[i] + sld.substr(i + 1));
    }
}

void gen_replacement(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        const auto it = keyboard_adjacent().find(sld[i]);
        if (it == keyboard_adjacent().end()) continue;
        for (const char c : it->second) {
            std::string candidate = sld;
            candidate[i] = c;
            emit.sld(FuzzTechnique::replacement, candidate);
        }
    }
}

void gen_transposition(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i + 1 < sld.size(); ++i) {
        if (sld[i] == sld[i + 1]) continue;
        std::string candidate = sld;
        std::swap(candidate[i], candidate[i + 1]);
        emit.sld(FuzzTechnique::transposition, candidate);
    }
}

void gen_vowel_swap(const std::string& sld, Emitter& emit) {
    for (std::size_t i = 0; i < sld.size(); ++i) {
        if (kVowels.find(sld[i]) == std::string_view::npos) continue;
        for (const char v : kVowels) {
            if (v == sld[i]) continue;
            std::string candidate = sld;
            candidate[i] = v;
            emit.sld(FuzzTechnique::vowel_swap, candidate);
        }
    }
}

void gen_tld_swap(const std::string& sld, const std::string& tld, Emitter& emit) {
    for (const auto& alt : common_tlds()) {
        if (alt == tld) continue;
        emit.full(FuzzTechnique::tld_swap, sld + "." + alt);
    }
}

}  // namespace

const char* to_string(FuzzTechnique technique) {
    switch (technique) {
        case FuzzTechnique::addition: return "addition";
        case FuzzTechnique::bitsquatting: return "bitsquatting";
        case FuzzTechnique::homoglyph: return "homoglyph";
        case FuzzTechnique::hyphenation: return "hyphenation";
        case FuzzTechnique::insertion: return "insertion";
        case FuzzTechnique::omission: return "omission";
        case FuzzTechnique::repetition: return "repetition";
        case FuzzTechnique::replacement: return "replacement";
        case FuzzTechnique::subdomain: return "subdomain";
        case FuzzTechnique::transposition: return "transposition";
        case FuzzTechnique::vowel_swap: return "vowel_swap";
        case FuzzTechnique::tld_swap: return "tld_swap";
    }
    return "unknown";
}

std::optional<FuzzTechnique> technique_from_string(std::string_view name) {
    for (const auto technique : all_techniques()) {
        if (name == to_string(technique)) return technique;
    }
    return std::nullopt;
}

const std::vector<FuzzTechnique>& all_techniques() {
    static const std::vector<FuzzTechnique> techniques = {
        FuzzTechnique::addition,     FuzzTechnique::bitsquatting,
        FuzzTechnique::homoglyph,    FuzzTechnique::hyphenation,
        FuzzTechnique::insertion,    FuzzTechnique::omission,
        FuzzTechnique::repetition,   FuzzTechnique::replacement,
        FuzzTechnique::subdomain,    FuzzTechnique::transposition,
        FuzzTechnique::vowel_swap,   FuzzTechnique::tld_swap};
    return techniques;
}

std::vector<Permutation> generate(const std::string& origin,
                                  const std::vector<FuzzTechnique>& techniques) {
    const auto [sld, tld] = split_sld_tld(origin);
    if (sld.empty()) throw std::runtime_error("origin has an empty second-level label: " + origin);

    std::vector<Permutation> result;
    Emitter emit{origin, tld, {}, &result};
    for (const auto technique : all_techniques()) {
        if (std::find(techniques.begin(), techniques.end(), technique) == techniques.end()) {
            continue;
        }
        switch (technique) {
            case FuzzTechnique::addition: gen_addition(sld, emit); break;
            case FuzzTechnique::bitsquatting: gen_bitsquatting(sld, emit); break;
            case FuzzTechnique::homoglyph: gen_homoglyph(sld, emit); break;
            case FuzzTechnique::hyphenation:
                gen_pair_insert(sld, FuzzTechnique::hyphenation, '-', emit);
                break;
            case FuzzTechnique::insertion: gen_insertion(sld, emit); break;
            case FuzzTechnique::omission: gen_omission(sld, emit); break;
            case FuzzTechnique::repetition: gen_repetition(sld, emit); break;
            case FuzzTechnique::replacement: gen_replacement(sld, emit); break;
            case FuzzTechnique::subdomain:
                gen_pair_insert(sld, FuzzTechnique::subdomain, '.', emit);
                break;
            case FuzzTechnique::transposition: gen_transposition(sld, emit); break;
            case FuzzTechnique::vowel_swap: gen_vowel_swap(sld, emit); break;
            case FuzzTechnique::tld_swap: gen_tld_swap(sld, tld, emit); break;
        }
    }
    std::sort(result.begin(), result.end(), [](const Permutation& a, const Permutation& b) {
        if (a.technique != b.technique) return a.technique < b.technique;
        return a.candidate < b.candidate;
    });
    return result;
}

WatchIndex WatchIndex::build(const std::vector<std::string>& brands,
                             const std::vector<FuzzTechnique>& techniques) {
    if (brands.empty()) throw std::runtime_error("watch index needs at least one brand");
    WatchIndex index;
    for (const auto& brand : brands) {
        for (const auto& perm : generate(brand, techniques)) {
            index.entries_[perm.candidate].emplace_back(brand, perm.technique);
        }
    }
    return index;
}

std::vector<PermutationHit> match_stream(
    const WatchIndex& index,
    const std::vector<std::pair<std::string, std::int64_t>>& observed) {
    // (observed, brand, technique) -> earliest timestamp
    std::map<std::tuple<std::string, std::string, FuzzTechnique>, std::int64_t> earliest;
    for (const auto& [domain, ts] : observed) {
        const auto* owners = index.find(domain);
        if (!owners) continue;
        for (const auto& [brand, technique] : *owners) {
            const auto key = std::make_tuple(domain, brand, technique);
            const auto it = earliest.find(key);
            if (it == earliest.end() || ts < it->second) earliest[key] = ts;
        }
    }
    std::vector<PermutationHit> hits;
    hits.reserve(earliest.size());
    for (const auto& [key, ts] : earliest) {
        const auto& [domain, brand, technique] = key;
        hits.push_back(PermutationHit{domain, Permutation{technique, domain, brand}, brand, ts});
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const PermutationHit& a, const PermutationHit& b) {
                         return a.first_seen < b.first_seen;
                     });
    return hits;
}

}  // namespace botwatch
