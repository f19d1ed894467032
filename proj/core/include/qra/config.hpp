#pragma once

#include <cstdint>
#include <string>

namespace qra {

/// Reward scheme selector. Independent and PacketBased acknowledge with a
/// single bit; Collaborative sends a quantized congestion level in
/// `header_bits` bits.
enum class Scheme { Independent, Collaborative, PacketBased };

const char* scheme_name(Scheme s);

/// Full parameter set for one simulated episode.
struct SimConfig {
    std::int32_t n_devices = 400;          // N
    std::int32_t n_slots = 400;            // K, slots per frame
    std::int32_t packets_per_device = 100; // L
    double learning_rate = 0.1;            // alpha, in (0, 1]
    std::int32_t payload_bits = 64;        // p
    std::int32_t header_bits = 1;          // b; must be 1 unless Collaborative
    Scheme scheme = Scheme::Independent;
    std::int64_t max_frames = 1'000'000;   // cap; hitting it means no convergence
    std::uint64_t seed = 1;                // master seed

    double loading_factor() const {
        return static_cast<double>(n_devices) / static_cast<double>(n_slots);
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

}  // namespace qra
