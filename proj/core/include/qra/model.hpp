#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qra/rng.hpp"

namespace qra {

/// Outcome of one time-slot within a frame, a function of occupancy alone:
/// no occupant, exactly one, or more than one.
enum class SlotOutcome { Idle, Success, Collision };

constexpr SlotOutcome classify_count(std::int64_t occupants) {
    if (occupants <= 0) return SlotOutcome::Idle;
    return occupants == 1 ? SlotOutcome::Success : SlotOutcome::Collision;
}

inline SlotOutcome classify_slot(std::span<const std::int32_t> occupants) {
    return classify_count(static_cast<std::int64_t>(occupants.size()));
}

/// Picks an index from the argmax set of `q_row`. A unique maximum is
/// returned deterministically and consumes no randomness; an m-way tie is
/// resolved uniformly with a single bounded draw.
///
/// Throws std::invalid_argument on an empty row.
std::int32_t select_slot(std::span<const double> q_row, Rng& rng);

/// Groups device indices by chosen slot. `choices[n] < 0` means device n
/// did not transmit this frame. Every present choice must lie in [0, K).
std::vector<std::vector<std::int32_t>> build_occupancy(
    std::span<const std::int32_t> choices, std::int32_t n_slots);

/// Per-device transmission state: packets left and the frame (1-based) at
/// which the last packet got through. finish_frame stays -1 until then.
struct DeviceState {
    std::vector<std::int32_t> remaining;
    std::vector<std::int64_t> finish_frame;

    static DeviceState fresh(std::int32_t n_devices, std::int32_t packets) {
        DeviceState d;
        d.remaining.assign(static_cast<std::size_t>(n_devices), packets);
        d.finish_frame.assign(static_cast<std::size_t>(n_devices), -1);
        return d;
    }

    std::int32_t active_count() const {
        std::int32_t n = 0;
        for (auto r : remaining) n += (r > 0) ? 1 : 0;
        return n;
    }
};

}  // namespace qra
