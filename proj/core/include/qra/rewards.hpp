#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "qra/config.hpp"
#include "qra/model.hpp"

namespace qra {

/// Scheme selector with the collaborative quantizer width attached.
struct RewardScheme {
    Scheme tag = Scheme::Independent;
    std::int32_t quant_bits = 1;  // used by Collaborative only

    static RewardScheme independent() { return {Scheme::Independent, 1}; }
    static RewardScheme collaborative(std::int32_t bits) {
        if (bits < 1) throw std::invalid_argument("quant_bits must be >= 1");
        return {Scheme::Collaborative, bits};
    }
    static RewardScheme packet_based() { return {Scheme::PacketBased, 1}; }
    static RewardScheme from_config(const SimConfig& cfg) {
        return {cfg.scheme,
                cfg.scheme == Scheme::Collaborative ? cfg.header_bits : 1};
    }

    /// Bits charged per acknowledgement message.
    std::int32_t header_bits() const {
        return tag == Scheme::Collaborative ? quant_bits : 1;
    }

    /// Stable token for CSV output: "independent", "packet",
    /// "collaborative_b<bits>".
    std::string label() const;

    friend bool operator==(const RewardScheme&, const RewardScheme&) = default;
};

/// One pending learning step: device's entry for `slot` moves toward
/// `target`, which always lies in [-1, 1].
struct UpdateTarget {
    std::int32_t device = 0;
    std::int32_t slot = 0;
    double target = 0.0;
};

/// +1 on success, -1 on collision.
inline double independent_reward(SlotOutcome outcome) {
    if (outcome == SlotOutcome::Idle) {
        throw std::invalid_argument("independent_reward: slot had no sender");
    }
    return outcome == SlotOutcome::Success ? 1.0 : -1.0;
}

/// Fraction of all devices that picked the slot, in (0, 1].
inline double congestion_level(std::int32_t occupants, std::int32_t n_devices) {
    if (occupants < 1 || occupants > n_devices) {
        throw std::invalid_argument("congestion_level: occupants out of range");
    }
    return static_cast<double>(occupants) / static_cast<double>(n_devices);
}

/// Smallest of the 2^bits uniform levels in (0, 1] that is >= c. Never
/// under-reports and is monotone in c.
inline double quantize_congestion(double c, std::int32_t bits) {
    if (!(c > 0.0) || c > 1.0) {
        throw std::invalid_argument("quantize_congestion: c must be in (0, 1]");
    }
    if (bits < 1) throw std::invalid_argument("quantize_congestion: bits < 1");
    const double scale = std::ldexp(1.0, bits);  // 2^bits
    return std::ceil(c * scale) / scale;
}

/// +1 on success, minus the quantized congestion level on collision.
inline double collaborative_reward(SlotOutcome outcome, double congestion,
                                   std::int32_t bits) {
    if (outcome == SlotOutcome::Idle) {
        throw std::invalid_argument("collaborative_reward: slot had no sender");
    }
    if (outcome == SlotOutcome::Success) return 1.0;
    return -quantize_congestion(congestion, bits);
}

/// 1 - remaining/total: 0 for a device that has sent nothing yet, rising
/// toward 1 as its backlog drains.
inline double epsilon_factor(std::int32_t remaining, std::int32_t total) {
    if (total < 1 || remaining < 0 || remaining > total) {
        throw std::invalid_argument("epsilon_factor: remaining out of range");
    }
    return 1.0 - static_cast<double>(remaining) / static_cast<double>(total);
}

/// Packet-based update target: +1 on success; on collision the penalty is
/// scaled by how little backlog the device has left, so devices with more
/// pending packets are penalized less. `remaining` is the backlog before
/// any decrement this frame.
inline double packet_based_target(SlotOutcome outcome, std::int32_t remaining,
                                  std::int32_t total) {
    if (outcome == SlotOutcome::Idle) {
        throw std::invalid_argument("packet_based_target: slot had no sender");
    }
    if (outcome == SlotOutcome::Success) return 1.0;
    return -epsilon_factor(remaining, total);
}

/// Convex step toward the target; the common update applied by every
/// scheme. Inputs in [-1, 1] stay in [-1, 1]; the clamp only ever trims
/// the last-ulp rounding excess a full step (alpha = 1) can produce.
inline double apply_update(double q, double alpha, double target) {
    const double v = q + alpha * (target - q);
    if (v > 1.0) return 1.0;
    if (v < -1.0) return -1.0;
    return v;
}

}  // namespace qra
