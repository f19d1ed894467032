#include "qra/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace qra {

double normalized_throughput(std::int64_t successes, std::int64_t total_slots,
                             std::int32_t payload_bits,
                             std::int32_t header_bits) {
    if (total_slots < 1) {
        throw std::invalid_argument("normalized_throughput: total_slots < 1");
    }
    if (successes < 0 || payload_bits < 1 || header_bits < 1) {
        throw std::invalid_argument("normalized_throughput: bad argument");
    }
    const double overhead = static_cast<double>(payload_bits) /
                            static_cast<double>(header_bits + payload_bits);
    return overhead * (static_cast<double>(successes) /
                       static_cast<double>(total_slots));
}

SpreadStats completion_spread(std::span<const std::int64_t> finish_frames) {
    if (finish_frames.empty()) {
        throw std::invalid_argument("completion_spread: no devices");
    }
    double sum = 0.0;
    for (auto f : finish_frames) {
        if (f < 0) {
            throw std::invalid_argument(
                "completion_spread: unfinished device present");
        }
        sum += static_cast<double>(f);
    }
    const auto n = static_cast<double>(finish_frames.size());
    SpreadStats s;
    s.mean = sum / n;
    if (finish_frames.size() < 2) return s;
    double ss = 0.0;
    for (auto f : finish_frames) {
        const double d = static_cast<double>(f) - s.mean;
        ss += d * d;
    }
    s.stddev = std::sqrt(ss / (n - 1.0));
    return s;
}

AsymptoticEstimate asymptotic_throughput_estimate(
    std::span<const std::pair<double, double>> curve) {
    if (curve.size() < 2) {
        throw std::invalid_argument(
            "asymptotic_throughput_estimate: need at least two points");
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (!(curve[i].first > curve[i - 1].first)) {
            throw std::invalid_argument(
                "asymptotic_throughput_estimate: packet counts must increase");
        }
    }
    AsymptoticEstimate e;
    e.value = curve.back().second;
    e.delta = curve.back().second - curve[curve.size() - 2].second;
    return e;
}

MetricRecord MetricRecord::from_episode(const EpisodeStats& stats,
                                        const SimConfig& cfg) {
    MetricRecord m;
    m.normalized_throughput =
        qra::normalized_throughput(stats.total_successes, stats.total_slots,
                                   cfg.payload_bits, cfg.header_bits);
    m.latency_slots = qra::latency_slots(stats);
    m.converged = stats.converged;
    if (stats.converged) {
        const SpreadStats spread = completion_spread(stats.finish_frames);
        m.finish_mean = spread.mean;
        m.finish_std = spread.stddev;
    }
    return m;
}

}  // namespace qra
