#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "qra/engine.hpp"

namespace qra {

/// (p / (b + p)) * S / T: successes per slot, discounted by the share of
/// each message spent on the acknowledgement header.
double normalized_throughput(std::int64_t successes, std::int64_t total_slots,
                             std::int32_t payload_bits,
                             std::int32_t header_bits);

/// Total slots elapsed until the last device finished (the frame cap
/// times slots-per-frame for episodes that never converged).
inline std::int64_t latency_slots(const EpisodeStats& stats) {
    return stats.total_slots;
}

struct SpreadStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1) normalization; 0 when n < 2
};

/// Mean and sample standard deviation of per-device finish frames.
/// Requires every device to have finished.
SpreadStats completion_spread(std::span<const std::int64_t> finish_frames);

struct AsymptoticEstimate {
    double value = 0.0;  // mean throughput at the largest backlog
    double delta = 0.0;  // change over the last two grid points
};

/// Reads the large-backlog limit off a (packets, mean throughput) curve:
/// the value at the largest packet count, with the final increment as a
/// convergence indicator. Needs at least two points with increasing
/// packet counts.
AsymptoticEstimate asymptotic_throughput_estimate(
    std::span<const std::pair<double, double>> curve);

/// Figures of merit for one episode.
struct MetricRecord {
    double normalized_throughput = 0.0;
    std::int64_t latency_slots = 0;
    double finish_mean = 0.0;
    double finish_std = 0.0;
    bool converged = false;

    static MetricRecord from_episode(const EpisodeStats& stats,
                                     const SimConfig& cfg);
};

}  // namespace qra
