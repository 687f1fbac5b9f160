#include "botwatch/dgagen.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "botwatch/rng.hpp"
#include "botwatch/textutil.hpp"

namespace botwatch {

namespace {

// 64 words, alphabetical, fixed: the whole candidate space of the
// wordlist_concat family is word x word over this table.
const std::vector<std::string>& wordlist64() {
    static const std::vector<std::string> words = {
        "acorn",  "badger", "bamboo", "basalt", "beacon", "bison",   "bramble", "briar",
        "cedar",  "cinder", "cobalt", "condor", "coral",  "crane",   "cypress", "dune",
        "ember",  "falcon", "fennel", "fjord",  "flint",  "gale",    "garnet",  "geyser",
        "glade",  "gorse",  "granite","grotto", "hazel",  "heron",   "ibis",    "jasper",
        "juniper","kelp",   "kestrel","lagoon", "larch",  "lichen",  "lynx",    "magma",
        "maple",  "marsh",  "mesa",   "mica",   "moor",   "nettle",  "obsidian","ocelot",
        "onyx",   "osprey", "otter",  "pebble", "pine",   "quartz",  "raven",   "reed",
        "sable",  "sedge",  "shale",  "sorrel", "tarn",   "thistle", "vole",    "wren"};
    return words;
}

constexpr std::uint32_t kLcgMultiplier = 1664525u;
constexpr std::uint32_t kLcgIncrement = 1013904223u;

class LcgCharStream {
public:
    explicit LcgCharStream(std::uint64_t seed) : state_(static_cast<std::uint32_t>(seed)) {}

    char next_char() {
        state_ = kLcgMultiplier * state_ + kLcgIncrement;
        return static_cast<char>('a' + state_ % 26);
    }

private:
    std::uint32_t state_;
};

std::string hash_hex_label(std::uint64_t seed, std::size_t index, int length) {
    const std::string input = std::to_string(seed) + ":" + std::to_string(index);
    std::string label;
    label.reserve(static_cast<std::size_t>(length));
    std::uint64_t hash = fnv1a64(input);
    static const char* hex = "0123456789abcdef";
    while (static_cast<int>(label.size()) < length) {
        for (int nibble = 15; nibble >= 0 && static_cast<int>(label.size()) < length; --nibble) {
            label += hex[(hash >> (nibble * 4)) & 0xf];
        }
        // Labels longer than one digest: chain FNV-1a over the previous
        // hash's little-endian bytes.
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((hash >> (8 * i)) & 0xff);
        hash = fnv1a64(std::string_view(bytes, 8));
    }
    return label;
}

void validate(const DgaConfig& config) {
    if (config.count < 1) throw std::runtime_error("dga count must be >= 1");
    const bool uses_length = config.family != DgaFamily::wordlist_concat;
    if (uses_length && (config.length < 4 || config.length > 32)) {
        throw std::runtime_error("dga label length must be in [4, 32]");
    }
    const auto& tlds = common_tlds();
    if (std::find(tlds.begin(), tlds.end(), config.tld) == tlds.end()) {
        throw std::runtime_error("dga tld not in the embedded suffix list: " + config.tld);
    }
    if (config.family == DgaFamily::date_seeded) {
        const auto& d = config.date;
        if (d.year < 1970 || d.year > 9999 || d.month < 1 || d.month > 12 || d.day < 1 ||
            d.day > 31) {
            throw std::runtime_error("date_seeded needs a plausible (year, month, day)");
        }
    }
}

}  // namespace

const char* to_string(DgaFamily family) {
    switch (family) {
        case DgaFamily::lcg_char: return "lcg_char";
        case DgaFamily::hash_hex: return "hash_hex";
        case DgaFamily::wordlist_concat: return "wordlist_concat";
        case DgaFamily::date_seeded: return "date_seeded";
    }
    return "unknown";
}

std::vector<TextSample> generate_dga(const DgaConfig& config) {
    validate(config);

    std::uint64_t seed = config.seed;
    DgaFamily family = config.family;
    if (family == DgaFamily::date_seeded) {
        seed = static_cast<std::uint64_t>(config.date.year) * 10000 +
               static_cast<std::uint64_t>(config.date.month) * 100 +
               static_cast<std::uint64_t>(config.date.day);
        family = DgaFamily::lcg_char;
    }

    const std::string source = std::string("dga:") + to_string(config.family);
    std::vector<TextSample> out;
    out.reserve(config.count);
    std::unordered_set<std::string> seen;

    LcgCharStream lcg(seed);
    const std::size_t max_attempts = config.count * 64 + 65536;
    std::size_t attempts = 0;
    for (std::size_t index = 0; out.size() < config.count; ++index, ++attempts) {
        if (attempts > max_attempts) {
            throw std::runtime_error("dga family exhausted after " +
                                     std::to_string(out.size()) + " distinct domains of " +
                                     std::to_string(config.count) + " requested");
        }
        std::string label;
        switch (family) {
            case DgaFamily::lcg_char: {
                label.reserve(static_cast<std::size_t>(config.length));
                for (int i = 0; i < config.length; ++i) label += lcg.next_char();
                break;
            }
            case DgaFamily::hash_hex:
                label = hash_hex_label(seed, index, config.length);
                break;
            case DgaFamily::wordlist_concat: {
                SplitMix64 rng(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
                const auto& words = wordlist64();
                label = words[rng.next_below(words.size())];
                label += words[rng.next_below(words.size())];
                break;
            }
            case DgaFamily::date_seeded:
                break;  // rewritten to lcg_char above
        }
        std::string domain = label + "." + config.tld;
        if (!seen.insert(domain).second) continue;
        out.push_back(TextSample{std::move(domain), 1, SampleKind::domain, source});
    }
    return out;
}

const std::vector<DgaFamilyInfo>& list_families() {
    static const std::vector<DgaFamilyInfo> families = {
        {"lcg_char", "seed, count, length, tld",
         "32-bit linear congruential stream mapped to letters, one state step per character"},
        {"hash_hex", "seed, count, length, tld",
         "FNV-1a digest of seed:index, hex-encoded and truncated to the label length"},
        {"wordlist_concat", "seed, count, tld",
         "two words drawn from an embedded 64-word table per splitmix64(seed, index)"},
        {"date_seeded", "date, count, length, tld",
         "lcg_char keyed by year*10000 + month*100 + day"},
    };
    return families;
}

}  // namespace botwatch
