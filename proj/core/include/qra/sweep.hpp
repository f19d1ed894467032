#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qra/config.hpp"
#include "qra/rewards.hpp"

namespace qra {

enum class SweepAxis {
    LoadingFactor,
    PacketsPerDevice,
    PayloadBits,
    QuantBits,
    LearningRate,
};

/// Config-file key the axis corresponds to.
const char* axis_key(SweepAxis axis);

/// Loading factor to device count: round-half-up of lf * K, so grid
/// values like 0.75 * 400 land exactly.
std::int32_t devices_for_loading(double loading_factor, std::int32_t n_slots);

/// A Monte Carlo experiment: one parameter axis swept over a grid, every
/// scheme run at every grid point, `reps` independent episodes per point.
struct SweepSpec {
    SimConfig base;
    SweepAxis axis = SweepAxis::LoadingFactor;
    std::vector<double> grid;  // nonempty, strictly increasing
    std::vector<RewardScheme> schemes;
    std::int32_t reps = 200;

    /// Throws std::invalid_argument; a bad grid point is named together
    /// with its axis value and scheme.
    void validate() const;

    /// Materializes the episode config for one (scheme, grid value) point.
    SimConfig config_at(const RewardScheme& scheme, double axis_value) const;
};

/// Aggregates for one (scheme, grid value) point. Throughput/latency
/// moments cover converged episodes only; episodes that hit the frame cap
/// are tallied in `nonconverged`.
struct SweepRow {
    RewardScheme scheme;
    double axis_value = 0.0;
    std::int32_t n_devices = 0;
    double mean_throughput = 0.0;
    double std_throughput = 0.0;
    double mean_latency = 0.0;
    double std_latency = 0.0;
    double mean_finish_std = 0.0;
    std::int32_t nonconverged = 0;
    std::int32_t reps = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::LoadingFactor;
    std::vector<SweepRow> rows;  // scheme-major, grid ascending
};

struct RunOptions {
    int workers = 1;  // episode-level parallelism; result is identical for any count
};

/// Runs the full grid. Episode seeds derive from (master seed, point
/// index, episode index) alone, and aggregation reduces episodes in index
/// order, so the result is identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

/// Ready-made sweeps mirroring the experiment suite this tool ships for:
/// fig2 quantizer-width comparison, fig3/fig6 load sweep, fig4 backlog
/// sweep, fig5 payload sweep, fig7 learning-rate sweep.
enum class FigurePreset { Fig2, Fig3, Fig4, Fig5, Fig6, Fig7 };

SweepSpec preset(FigurePreset which);
std::optional<FigurePreset> parse_preset(std::string_view name);  // "fig2".."fig7"

}  // namespace qra
