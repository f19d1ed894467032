#pragma once

// Slow episode runner assembled from the pure frame/reward operations,
// kept independent of the engine's fused loop. Consumes random draws in
// the same order (device-index ascending, one optional tie-break per
// device), so a fast and a reference run with the same seed must agree
// bit for bit.

#include <cstdint>
#include <vector>

#include "qra/config.hpp"
#include "qra/engine.hpp"
#include "qra/metrics.hpp"
#include "qra/model.hpp"
#include "qra/rewards.hpp"
#include "qra/rng.hpp"

namespace qra_test {

struct ReferenceTrace {
    qra::EpisodeStats stats;
    std::int64_t transmissions = 0;  // total device-frame transmissions
    bool occupancy_invariant_held = true;
};

inline ReferenceTrace reference_episode(const qra::SimConfig& cfg,
                                        qra::Rng& rng) {
    using namespace qra;
    cfg.validate();
    const std::int32_t n = cfg.n_devices;
    const std::int32_t k = cfg.n_slots;
    const std::int32_t packets = cfg.packets_per_device;
    const RewardScheme scheme = RewardScheme::from_config(cfg);

    std::vector<std::vector<double>> rows(
        static_cast<std::size_t>(n),
        std::vector<double>(static_cast<std::size_t>(k), 0.0));
    DeviceState dev = DeviceState::fresh(n, packets);

    ReferenceTrace trace;
    trace.stats.finish_frames.assign(static_cast<std::size_t>(n), -1);

    std::int64_t frame = 0;
    while (dev.active_count() > 0 && frame < cfg.max_frames) {
        ++frame;
        std::vector<std::int32_t> choices(static_cast<std::size_t>(n), -1);
        std::int32_t transmitting = 0;
        for (std::int32_t d = 0; d < n; ++d) {
            if (dev.remaining[static_cast<std::size_t>(d)] <= 0) continue;
            choices[static_cast<std::size_t>(d)] =
                select_slot(rows[static_cast<std::size_t>(d)], rng);
            ++transmitting;
        }
        const auto occupancy = build_occupancy(choices, k);

        std::int64_t occupants_total = 0;
        trace.stats.total_slots += k;
        for (const auto& slot : occupancy) {
            occupants_total += static_cast<std::int64_t>(slot.size());
            switch (classify_slot(slot)) {
                case SlotOutcome::Success:
                    ++trace.stats.total_successes;
                    break;
                case SlotOutcome::Collision:
                    trace.stats.total_failures +=
                        static_cast<std::int64_t>(slot.size());
                    break;
                case SlotOutcome::Idle:
                    break;
            }
        }
        if (occupants_total != transmitting) {
            trace.occupancy_invariant_held = false;
        }
        trace.transmissions += transmitting;

        for (std::int32_t d = 0; d < n; ++d) {
            const std::int32_t c = choices[static_cast<std::size_t>(d)];
            if (c < 0) continue;
            const auto& slot = occupancy[static_cast<std::size_t>(c)];
            const SlotOutcome outcome = classify_slot(slot);
            double target = 0.0;
            switch (scheme.tag) {
                case Scheme::Independent:
                    target = independent_reward(outcome);
                    break;
                case Scheme::Collaborative:
                    target = collaborative_reward(
                        outcome,
                        congestion_level(static_cast<std::int32_t>(slot.size()), n),
                        scheme.quant_bits);
                    break;
                case Scheme::PacketBased:
                    target = packet_based_target(
                        outcome, dev.remaining[static_cast<std::size_t>(d)],
                        packets);
                    break;
            }
            double& q = rows[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
            q = apply_update(q, cfg.learning_rate, target);
            if (outcome == SlotOutcome::Success) {
                if (--dev.remaining[static_cast<std::size_t>(d)] == 0) {
                    dev.finish_frame[static_cast<std::size_t>(d)] = frame;
                    trace.stats.finish_frames[static_cast<std::size_t>(d)] = frame;
                }
            }
        }
    }
    trace.stats.frames_used = frame;
    trace.stats.converged = (dev.active_count() == 0);
    return trace;
}

}  // namespace qra_test
