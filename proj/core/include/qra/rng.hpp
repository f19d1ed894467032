#pragma once

#include <array>
#include <cstdint>

namespace qra {

/// SplitMix64 step, used for seeding and stream derivation.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** stream, seeded through SplitMix64.
///
/// One instance is one random stream. Streams seeded from distinct
/// 64-bit values have independent 256-bit states, so running many
/// episodes in parallel cannot produce overlapping sequences in
/// practice.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
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

    /// Unbiased draw from [0, n) via Lemire's multiply-shift rejection.
    /// Consumes no input when n <= 1.
    std::uint32_t bounded(std::uint32_t n) {
        if (n <= 1) return 0;
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = (0u - n) % n;
            while (low < threshold) {
                x = next() >> 32;
                m = x * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Seed for the stream of episode `rep` at sweep point `point`, derived
/// from the master seed alone. Independent of execution order, so a
/// parallel run and a serial run draw identical streams.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t point_index,
                                           std::uint64_t episode_index) {
    std::uint64_t s = master_seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (point_index * 0xBF58476D1CE4E5B9ULL);
    h = splitmix64(s);
    s = h ^ (episode_index * 0x94D049BB133111EBULL);
    return splitmix64(s);
}

}  // namespace qra
