#pragma once

#include <cstdint>
#include <random>

namespace panelbreak {

// Seedable, portable random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, so identical seeds give identical draws on every conforming
// implementation. Normal deviates are produced by inverse-CDF transform of a
// 53-bit uniform rather than std::normal_distribution (whose algorithm is
// implementation-defined).
//
// Stream splitting: entity i of a master seed s draws from an independent
// stream seeded with splitmix64(s + (i + 1) * 0x9E3779B97F4A7C15). Generating
// entities in parallel therefore yields bit-identical panels to generating
// them serially.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    static SplitRng for_entity(std::uint64_t master_seed, std::uint64_t entity_index) {
        return SplitRng(master_seed + (entity_index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal deviate via inverse CDF.
    double normal();

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace panelbreak
