#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qra/config.hpp"
#include "qra/model.hpp"
#include "qra/qtable.hpp"
#include "qra/rewards.hpp"
#include "qra/rng.hpp"

namespace qra {

/// Episode counters. total_failures counts device-transmissions that
/// collided; total_slots counts every slot of every frame, idle ones
/// included.
struct EpisodeStats {
    std::int64_t total_successes = 0;  // S
    std::int64_t total_failures = 0;   // F
    std::int64_t total_slots = 0;      // T
    std::int64_t frames_used = 0;
    std::vector<std::int64_t> finish_frames;  // 1-based; -1 if unfinished
    bool converged = false;
};

struct EpisodeOutcome {
    EpisodeStats stats;
    std::optional<QTable> q_final;  // retained only on request
};

/// Everything one frame produces before any state is mutated.
struct FrameResult {
    std::vector<std::int32_t> choices;  // per device; -1 = inactive
    std::vector<std::vector<std::int32_t>> occupancy;  // per slot
    std::int32_t successes = 0;
    std::int32_t collisions = 0;  // slots with more than one occupant
};

/// Runs the selection and classification of a single frame without
/// mutating the table or device state. Returns exactly one update target
/// per transmitting device; finished devices appear nowhere.
std::pair<FrameResult, std::vector<UpdateTarget>> run_frame(
    const QTable& q, const DeviceState& devices, const SimConfig& cfg,
    Rng& rng);

/// Runs frames until every device has delivered all its packets or the
/// frame cap is hit. Hitting the cap is reported as converged == false,
/// not as an error. Identical (config, rng seed) gives bit-identical
/// stats.
EpisodeOutcome run_episode(const SimConfig& cfg, Rng& rng,
                           bool keep_qtable = false);

}  // namespace qra
