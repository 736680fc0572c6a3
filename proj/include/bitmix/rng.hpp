#pragma once

#include <cstdint>
#include <limits>

namespace bitmix {

// Deterministic, platform-independent generator (xoshiro256** seeded through
// splitmix64). The standard <random> distributions are not bit-reproducible
// across library implementations, so all draws are hand-rolled here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    // Child generator for a named stream and element index. Keyed derivation
    // keeps draw i independent of how many elements precede it.
    static Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        std::uint64_t h = 0x243F6A8885A308D3ull;
        h = mix64(h ^ seed);
        h = mix64(h ^ stream);
        h = mix64(h ^ index);
        return Rng(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0,n), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ull;
        return mix64(x);
    }

    std::uint64_t state_[4];
};

// Stream labels shared across the library so that every draw in a pipeline
// hangs off one master seed without collisions.
namespace streams {
inline constexpr std::uint64_t kEmbed = 1;
inline constexpr std::uint64_t kTransform = 2;
inline constexpr std::uint64_t kBox = 3;
inline constexpr std::uint64_t kShuffle = 4;
inline constexpr std::uint64_t kCover = 5;
inline constexpr std::uint64_t kBatch = 6;
}  // namespace streams

}  // namespace bitmix
