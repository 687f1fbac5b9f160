// Fuzzy spoof-permutation generator and the exact-match watch index used for
// early warning on newly observed domains.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace botwatch {

enum class FuzzTechnique {
    addition,
    bitsquatting,
    homoglyph,
    hyphenation,
    insertion,
    omission,
    repetition,
    replacement,
    subdomain,
    transposition,
    vowel_swap,
    tld_swap,
};

const char* to_string(FuzzTechnique technique);
std::optional<FuzzTechnique> technique_from_string(std::string_view name);
const std::vector<FuzzTechnique>& all_techniques();

struct Permutation {
    FuzzTechnique technique;
    std::string candidate;  // full domain, valid label syntax
    std::string origin;     // protected domain the candidate was derived from
};

struct PermutationHit {
    std::string observed;
    Permutation permutation;
    std::string brand;
    std::int64_t first_seen = 0;  // epoch ms
};

// Exhaustive candidates for one origin, deduplicated and sorted by
// (technique, candidate). The origin must be a normalized registrable
// domain; an empty second-level label throws.
std::vector<Permutation> generate(const std::string& origin,
                                  const std::vector<FuzzTechnique>& techniques);

// Immutable candidate -> (brand, technique) index over a brand list.
// Candidates colliding across brands keep every owner.
class WatchIndex {
public:
    static WatchIndex build(const std::vector<std::string>& brands,
                            const std::vector<FuzzTechnique>& techniques);

    std::size_t size() const { return entries_.size(); }
    bool contains(const std::string& candidate) const {
        return entries_.count(candidate) > 0;
    }
    const std::vector<std::pair<std::string, FuzzTechnique>>* find(
        const std::string& candidate) const {
        const auto it = entries_.find(candidate);
        return it == entries_.end() ? nullptr : &it->second;
    }

private:
    std::unordered_map<std::string, std::vector<std::pair<std::string, FuzzTechnique>>>
        entries_;
};

// One hit per (observed domain, brand, technique) with the earliest
// timestamp, ordered by first_seen.
std::vector<PermutationHit> match_stream(
    const WatchIndex& index,
    const std::vector<std::pair<std::string, std::int64_t>>& observed);

}  // namespace botwatch
