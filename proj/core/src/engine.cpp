#include "qra/engine.hpp"

#include <algorithm>

namespace qra {

namespace {

double collision_target(const RewardScheme& scheme, std::int32_t occupants,
                        std::int32_t n_devices, std::int32_t remaining,
                        std::int32_t packets_per_device) {
    switch (scheme.tag) {
        case Scheme::Independent:
            return independent_reward(SlotOutcome::Collision);
        case Scheme::Collaborative:
            return collaborative_reward(SlotOutcome::Collision,
                                        congestion_level(occupants, n_devices),
                                        scheme.quant_bits);
        case Scheme::PacketBased:
            return packet_based_target(SlotOutcome::Collision, remaining,
                                       packets_per_device);
    }
    return -1.0;
}

}  // namespace

std::pair<FrameResult, std::vector<UpdateTarget>> run_frame(
    const QTable& q, const DeviceState& devices, const SimConfig& cfg,
    Rng& rng) {
    const std::int32_t n = cfg.n_devices;
    const RewardScheme scheme = RewardScheme::from_config(cfg);

    FrameResult frame;
    frame.choices.assign(static_cast<std::size_t>(n), -1);
    for (std::int32_t d = 0; d < n; ++d) {
        if (devices.remaining[static_cast<std::size_t>(d)] <= 0) continue;
        frame.choices[static_cast<std::size_t>(d)] = q.choose(d, rng);
    }
    frame.occupancy = build_occupancy(frame.choices, cfg.n_slots);
    for (const auto& slot : frame.occupancy) {
        const SlotOutcome outcome = classify_slot(slot);
        if (outcome == SlotOutcome::Success) ++frame.successes;
        if (outcome == SlotOutcome::Collision) ++frame.collisions;
    }

    std::vector<UpdateTarget> targets;
    targets.reserve(static_cast<std::size_t>(n));
    for (std::int32_t d = 0; d < n; ++d) {
        const std::int32_t c = frame.choices[static_cast<std::size_t>(d)];
        if (c < 0) continue;
        const auto occupants = static_cast<std::int32_t>(
            frame.occupancy[static_cast<std::size_t>(c)].size());
        const double target =
            occupants == 1
                ? 1.0
                : collision_target(scheme, occupants, n,
                                   devices.remaining[static_cast<std::size_t>(d)],
                                   cfg.packets_per_device);
        targets.push_back({d, c, target});
    }
    return {std::move(frame), std::move(targets)};
}

EpisodeOutcome run_episode(const SimConfig& cfg, Rng& rng, bool keep_qtable) {
    cfg.validate();
    const std::int32_t n = cfg.n_devices;
    const std::int32_t k = cfg.n_slots;
    const std::int32_t packets = cfg.packets_per_device;
    const double alpha = cfg.learning_rate;
    const RewardScheme scheme = RewardScheme::from_config(cfg);

    QTable q(n, k);
    std::vector<std::int32_t> remaining(static_cast<std::size_t>(n), packets);
    std::vector<std::int32_t> choice(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> slot_count(static_cast<std::size_t>(k), 0);

    EpisodeStats stats;
    stats.finish_frames.assign(static_cast<std::size_t>(n), -1);

    std::int32_t active = n;
    std::int64_t frame = 0;
    while (active > 0 && frame < cfg.max_frames) {
        ++frame;
        std::fill(slot_count.begin(), slot_count.end(), 0);
        for (std::int32_t d = 0; d < n; ++d) {
            if (remaining[static_cast<std::size_t>(d)] == 0) {
                choice[static_cast<std::size_t>(d)] = -1;
                continue;
            }
            const std::int32_t c = q.choose(d, rng);
            choice[static_cast<std::size_t>(d)] = c;
            ++slot_count[static_cast<std::size_t>(c)];
        }

        stats.total_slots += k;
        for (std::int32_t s = 0; s < k; ++s) {
            const std::int32_t m = slot_count[static_cast<std::size_t>(s)];
            if (m == 1) {
                ++stats.total_successes;
            } else if (m > 1) {
                stats.total_failures += m;
            }
        }

        // Each device updates only its own chosen slot, so the apply
        // order cannot matter.
        for (std::int32_t d = 0; d < n; ++d) {
            const std::int32_t c = choice[static_cast<std::size_t>(d)];
            if (c < 0) continue;
            const std::int32_t m = slot_count[static_cast<std::size_t>(c)];
            if (m == 1) {
                q.apply(d, c, alpha, 1.0);
                if (--remaining[static_cast<std::size_t>(d)] == 0) {
                    stats.finish_frames[static_cast<std::size_t>(d)] = frame;
                    --active;
                }
            } else {
                q.apply(d, c, alpha,
                        collision_target(scheme, m, n,
                                         remaining[static_cast<std::size_t>(d)],
                                         packets));
            }
        }
    }

    stats.frames_used = frame;
    stats.converged = (active == 0);

    EpisodeOutcome out;
    out.stats = std::move(stats);
    if (keep_qtable) out.q_final = std::move(q);
    return out;
}

}  // namespace qra
