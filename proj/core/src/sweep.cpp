#include "qra/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qra/engine.hpp"
#include "qra/metrics.hpp"

namespace qra {

std::string RewardScheme::label() const {
    switch (tag) {
        case Scheme::Independent: return "independent";
        case Scheme::PacketBased: return "packet";
        case Scheme::Collaborative:
            return "collaborative_b" + std::to_string(quant_bits);
    }
    return "?";
}

const char* axis_key(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::LoadingFactor: return "loading_factor";
        case SweepAxis::PacketsPerDevice: return "packets_per_device";
        case SweepAxis::PayloadBits: return "payload_bits";
        case SweepAxis::QuantBits: return "header_bits";
        case SweepAxis::LearningRate: return "learning_rate";
    }
    return "?";
}

std::int32_t devices_for_loading(double loading_factor, std::int32_t n_slots) {
    if (!(loading_factor > 0.0) || loading_factor > 1e6) {
        throw std::invalid_argument("loading_factor out of range (0, 1e6]");
    }
    return static_cast<std::int32_t>(
        std::floor(loading_factor * static_cast<double>(n_slots) + 0.5));
}

namespace {

std::int32_t integral_axis_value(double v, SweepAxis axis) {
    const double rounded = std::floor(v + 0.5);
    if (v != rounded || rounded < 1.0 || rounded > 2e9) {
        std::ostringstream msg;
        msg << axis_key(axis) << " grid value " << v
            << " must be a positive integer";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::int32_t>(rounded);
}

}  // namespace

SimConfig SweepSpec::config_at(const RewardScheme& scheme,
                               double axis_value) const {
    SimConfig cfg = base;
    cfg.scheme = scheme.tag;
    cfg.header_bits = scheme.header_bits();
    switch (axis) {
        case SweepAxis::LoadingFactor:
            cfg.n_devices = devices_for_loading(axis_value, cfg.n_slots);
            break;
        case SweepAxis::PacketsPerDevice:
            cfg.packets_per_device = integral_axis_value(axis_value, axis);
            break;
        case SweepAxis::PayloadBits:
            cfg.payload_bits = integral_axis_value(axis_value, axis);
            break;
        case SweepAxis::QuantBits:
            cfg.header_bits = integral_axis_value(axis_value, axis);
            break;
        case SweepAxis::LearningRate:
            cfg.learning_rate = axis_value;
            break;
    }
    return cfg;
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }
    if (schemes.empty()) throw std::invalid_argument("sweep has no schemes");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (axis == SweepAxis::QuantBits) {
        for (const auto& s : schemes) {
            if (s.tag != Scheme::Collaborative) {
                throw std::invalid_argument(
                    "header_bits can only be swept for the collaborative scheme");
            }
        }
    }
    for (const auto& scheme : schemes) {
        for (double v : grid) {
            try {
                config_at(scheme, v).validate();
            } catch (const std::invalid_argument& e) {
                std::ostringstream msg;
                msg << "sweep point " << axis_key(axis) << "=" << v
                    << " (scheme " << scheme.label() << "): " << e.what();
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

namespace {

struct EpisodeMetrics {
    bool converged = false;
    double throughput = 0.0;
    double latency = 0.0;
    double finish_std = 0.0;
};

EpisodeMetrics measure_episode(const SimConfig& cfg, std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    const EpisodeOutcome out = run_episode(cfg, rng);
    const MetricRecord rec = MetricRecord::from_episode(out.stats, cfg);
    EpisodeMetrics m;
    m.converged = rec.converged;
    m.throughput = rec.normalized_throughput;
    m.latency = static_cast<double>(rec.latency_slots);
    m.finish_std = rec.finish_std;
    return m;
}

struct Accumulator {
    std::int64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double v) {
        ++n;
        sum += v;
        sum_sq += v * v;
    }
    double mean() const {
        return n > 0 ? sum / static_cast<double>(n)
                     : std::numeric_limits<double>::quiet_NaN();
    }
    double sample_std() const {
        if (n < 2) return n == 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        const double m = mean();
        const double var =
            (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return var > 0.0 ? std::sqrt(var) : 0.0;
    }
};

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
    spec.validate();

    SweepResult result;
    result.axis = spec.axis;
    std::uint64_t point_index = 0;

    for (const auto& scheme : spec.schemes) {
        for (double value : spec.grid) {
            const SimConfig cfg = spec.config_at(scheme, value);
            std::vector<EpisodeMetrics> episodes(
                static_cast<std::size_t>(spec.reps));

            const int workers =
                std::max(1, std::min(options.workers, static_cast<int>(spec.reps)));
            if (workers == 1) {
                for (std::int32_t rep = 0; rep < spec.reps; ++rep) {
                    episodes[static_cast<std::size_t>(rep)] = measure_episode(
                        cfg, derive_stream_seed(spec.base.seed, point_index,
                                                static_cast<std::uint64_t>(rep)));
                }
            } else {
                std::atomic<std::int32_t> next{0};
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int w = 0; w < workers; ++w) {
                    pool.emplace_back([&] {
                        while (true) {
                            const std::int32_t rep =
                                next.fetch_add(1, std::memory_order_relaxed);
                            if (rep >= spec.reps) break;
                            episodes[static_cast<std::size_t>(rep)] =
                                measure_episode(
                                    cfg, derive_stream_seed(
                                             spec.base.seed, point_index,
                                             static_cast<std::uint64_t>(rep)));
                        }
                    });
                }
                for (auto& t : pool) t.join();
            }

            // Fixed reduction order: episode index ascending.
            Accumulator thr, lat, spread;
            std::int32_t nonconverged = 0;
            for (const auto& e : episodes) {
                if (!e.converged) {
                    ++nonconverged;
                    continue;
                }
                thr.add(e.throughput);
                lat.add(e.latency);
                spread.add(e.finish_std);
            }

            // For a header-bits sweep the row's scheme reflects the
            // point's width, so CSV rows stay self-describing.
            RewardScheme row_scheme = scheme;
            if (spec.axis == SweepAxis::QuantBits) {
                row_scheme = RewardScheme::collaborative(cfg.header_bits);
            }

            SweepRow row;
            row.scheme = row_scheme;
            row.axis_value = value;
            row.n_devices = cfg.n_devices;
            row.mean_throughput = thr.mean();
            row.std_throughput = thr.sample_std();
            row.mean_latency = lat.mean();
            row.std_latency = lat.sample_std();
            row.mean_finish_std = spread.mean();
            row.nonconverged = nonconverged;
            row.reps = spec.reps;
            result.rows.push_back(row);

            ++point_index;
        }
    }
    return result;
}

namespace {

std::vector<RewardScheme> all_three_schemes() {
    return {RewardScheme::independent(), RewardScheme::collaborative(4),
            RewardScheme::packet_based()};
}

std::vector<double> standard_load_grid() {
    return {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};
}

SimConfig preset_base() {
    SimConfig cfg;
    cfg.n_slots = 400;
    cfg.n_devices = 400;
    cfg.packets_per_device = 100;
    cfg.learning_rate = 0.1;
    cfg.payload_bits = 64;
    cfg.header_bits = 1;
    cfg.scheme = Scheme::Independent;
    cfg.max_frames = 1'000'000;
    cfg.seed = 1;
    return cfg;
}

}  // namespace

SweepSpec preset(FigurePreset which) {
    SweepSpec spec;
    spec.base = preset_base();
    spec.reps = 200;
    switch (which) {
        case FigurePreset::Fig2:
            spec.axis = SweepAxis::LoadingFactor;
            spec.grid = standard_load_grid();
            spec.schemes = {RewardScheme::collaborative(1),
                            RewardScheme::collaborative(2),
                            RewardScheme::collaborative(4),
                            RewardScheme::collaborative(8),
                            RewardScheme::collaborative(16)};
            break;
        case FigurePreset::Fig3:
        case FigurePreset::Fig6:
            spec.axis = SweepAxis::LoadingFactor;
            spec.grid = standard_load_grid();
            spec.schemes = all_three_schemes();
            break;
        case FigurePreset::Fig4:
            spec.axis = SweepAxis::PacketsPerDevice;
            spec.grid = {50, 100, 200, 300, 400, 500};
            spec.schemes = all_three_schemes();
            break;
        case FigurePreset::Fig5:
            spec.axis = SweepAxis::PayloadBits;
            spec.grid = {1, 2, 4, 8, 16, 32, 64, 128, 256};
            spec.base.n_devices = devices_for_loading(1.5, spec.base.n_slots);
            spec.schemes = all_three_schemes();
            break;
        case FigurePreset::Fig7:
            spec.axis = SweepAxis::LearningRate;
            spec.grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
            spec.base.n_devices = devices_for_loading(1.5, spec.base.n_slots);
            spec.schemes = all_three_schemes();
            break;
    }
    return spec;
}

std::optional<FigurePreset> parse_preset(std::string_view name) {
    if (name == "fig2") return FigurePreset::Fig2;
    if (name == "fig3") return FigurePreset::Fig3;
    if (name == "fig4") return FigurePreset::Fig4;
    if (name == "fig5") return FigurePreset::Fig5;
    if (name == "fig6") return FigurePreset::Fig6;
    if (name == "fig7") return FigurePreset::Fig7;
    return std::nullopt;
}

}  // namespace qra
