#include <doctest.h>

#include <stdexcept>

#include <utility>
#include <vector>

#include "qra/metrics.hpp"

using namespace qra;

TEST_CASE("normalized throughput discounts the header share") {
    CHECK(normalized_throughput(100, 100, 64, 1) == 64.0 / 65.0);
    CHECK(normalized_throughput(100, 100, 64, 4) == 64.0 / 68.0);
    CHECK(normalized_throughput(5, 5, 64, 1) == 64.0 / 65.0);
    CHECK(normalized_throughput(0, 10, 64, 1) == 0.0);
    CHECK_THROWS_AS(normalized_throughput(1, 0, 64, 1), std::invalid_argument);
}

TEST_CASE("throughput never exceeds the header-limited ceiling") {
    for (std::int64_t s = 0; s <= 50; ++s) {
        for (std::int64_t t = std::max<std::int64_t>(s, 1); t <= 60; t += 7) {
            const double thr = normalized_throughput(s, t, 64, 4);
            CHECK(thr >= 0.0);
            CHECK(thr <= 64.0 / 68.0);
        }
    }
}

TEST_CASE("latency is the slot count") {
    EpisodeStats stats;
    stats.total_slots = 5 * 400;
    CHECK(latency_slots(stats) == 2000);
    stats.total_slots = 5;
    CHECK(latency_slots(stats) == 5);
}

TEST_CASE("completion spread") {
    const std::vector<std::int64_t> same{7, 7, 7, 7};
    const auto flat = completion_spread(same);
    CHECK(flat.mean == 7.0);
    CHECK(flat.stddev == 0.0);

    const std::vector<std::int64_t> two{4, 8};
    const auto s = completion_spread(two);
    CHECK(s.mean == 6.0);
    CHECK(s.stddev == doctest::Approx(2.8284271247461903));

    const std::vector<std::int64_t> lone{9};
    CHECK(completion_spread(lone).stddev == 0.0);

    const std::vector<std::int64_t> unfinished{4, -1};
    CHECK_THROWS_AS(completion_spread(unfinished), std::invalid_argument);
}

TEST_CASE("asymptotic estimate reads the tail of the curve") {
    const std::vector<std::pair<double, double>> flat{
        {50, 0.965}, {100, 0.965}, {500, 0.965}};
    const auto f = asymptotic_throughput_estimate(flat);
    CHECK(f.value == 0.965);
    CHECK(f.delta == 0.0);

    const std::vector<std::pair<double, double>> rising{{50, 0.90}, {500, 0.94}};
    const auto r = asymptotic_throughput_estimate(rising);
    CHECK(r.value == 0.94);
    CHECK(r.delta == doctest::Approx(0.04));

    const std::vector<std::pair<double, double>> single{{50, 0.9}};
    CHECK_THROWS_AS(asymptotic_throughput_estimate(single), std::invalid_argument);
    const std::vector<std::pair<double, double>> unsorted{{500, 0.9}, {50, 0.9}};
    CHECK_THROWS_AS(asymptotic_throughput_estimate(unsorted), std::invalid_argument);

    // Estimate inherits the throughput bound.
    CHECK(r.value <= 64.0 / 65.0);
}

TEST_CASE("paired single-packet devices always finish together") {
    // Two devices, two slots, one packet each: a frame either resolves
    // both or neither, so every converged episode has zero spread.
    SimConfig cfg;
    cfg.scheme = Scheme::PacketBased;
    cfg.n_devices = 2;
    cfg.n_slots = 2;
    cfg.packets_per_device = 1;
    for (int e = 0; e < 200; ++e) {
        Rng rng(derive_stream_seed(321, 0, static_cast<std::uint64_t>(e)));
        const auto out = run_episode(cfg, rng);
        REQUIRE(out.stats.converged);
        CHECK(out.stats.finish_frames[0] == out.stats.finish_frames[1]);
        CHECK(completion_spread(out.stats.finish_frames).stddev == 0.0);
    }
}

TEST_CASE("metric record composes the pieces") {
    EpisodeStats stats;
    stats.total_successes = 5;
    stats.total_slots = 5;
    stats.frames_used = 5;
    stats.converged = true;
    stats.finish_frames = {5};
    SimConfig cfg;
    cfg.n_devices = 1;
    cfg.n_slots = 1;
    cfg.packets_per_device = 5;
    cfg.payload_bits = 64;
    cfg.header_bits = 1;
    const auto rec = MetricRecord::from_episode(stats, cfg);
    CHECK(rec.normalized_throughput == 64.0 / 65.0);
    CHECK(rec.latency_slots == 5);
    CHECK(rec.finish_mean == 5.0);
    CHECK(rec.finish_std == 0.0);
    CHECK(rec.converged);
}
