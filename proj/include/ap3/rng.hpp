#pragma once

#include <array>
#include <cstdint>

namespace ap3 {

// xoshiro256++ seeded through SplitMix64. Fully self-contained so a seed
// reproduces the same stream on every platform and standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        // SplitMix64 expansion of the seed into the four state words.
        uint64_t z = seed;
        for (auto& word : state_) {
            z += 0x9e3779b97f4a7c15ull;
            uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ull;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebull;
            word = t ^ (t >> 31);
        }
    }

    uint64_t next_u64() {
        uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased draw from [0, bound) via Lemire rejection. bound must be > 0.
    uint32_t uniform_u32(uint32_t bound) {
        uint64_t x = next_u64() & 0xffffffffull;
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<uint64_t>(m & 0xffffffffull);
        if (low < bound) {
            uint64_t threshold = (0x100000000ull - bound) % bound;
            while (low < threshold) {
                x = next_u64() & 0xffffffffull;
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<uint64_t>(m & 0xffffffffull);
            }
        }
        return static_cast<uint32_t>(m >> 32);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> state_;
};

// Stable derivation of per-stage seeds from a run seed, so retries and
// sub-procedures draw from disjoint streams.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace ap3
