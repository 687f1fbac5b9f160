// Deterministic PRNG primitives shared by the dataset splitter, the DGA
// generators and model weight initialization. splitmix64 is fixed here so
// that seeded runs reproduce bit-for-bit across platforms.
#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace botwatch {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound); bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    float next_unit_float() { return static_cast<float>(next() >> 40) * 0x1.0p-24f; }

private:
    std::uint64_t state_;
};

// Fisher-Yates, driven by the stream above.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(values[i - 1], values[j]);
    }
}

// 64-bit FNV-1a. Offset/prime per the standard parameters.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t hash = 14695981039346656037ULL) {
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace botwatch
