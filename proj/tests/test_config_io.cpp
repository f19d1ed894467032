#include <doctest.h>

#include <sstream>
#include <string>

#include "qra/config_file.hpp"
#include "qra/csv.hpp"
#include "qra/sweep.hpp"

using namespace qra;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "test.cfg");
        return {};
    } catch (const ConfigError& e) {
        return e.what();
    }
}

}  // namespace

TEST_CASE("defaults fill in around an explicit scheme") {
    const auto parsed = parse_config_text("scheme = collaborative\n");
    REQUIRE(std::holds_alternative<RunConfig>(parsed));
    const auto& run = std::get<RunConfig>(parsed);
    CHECK(run.config.scheme == Scheme::Collaborative);
    CHECK(run.config.header_bits == 4);  // collaborative default width
    CHECK(run.config.n_slots == 400);
    CHECK(run.config.n_devices == 400);
    CHECK(run.config.packets_per_device == 100);
    CHECK(run.config.learning_rate == 0.1);
    CHECK(run.config.payload_bits == 64);
    CHECK(run.config.max_frames == 1'000'000);
    CHECK(run.reps == 200);
}

TEST_CASE("single-bit schemes default to one header bit") {
    const auto parsed = parse_config_text("scheme = packet\nn_slots = 10\n");
    const auto& run = std::get<RunConfig>(parsed);
    CHECK(run.config.header_bits == 1);
    CHECK(run.config.n_devices == 10);  // fully loaded by default
}

TEST_CASE("invariant violations are named with their line") {
    CHECK(error_of("scheme = packet\nlearning_rate = 0\n")
              .find("learning_rate") != std::string::npos);
    const auto msg = error_of("scheme = independent\nheader_bits = 4\n");
    CHECK(msg.find("header_bits") != std::string::npos);
    CHECK(msg.find("test.cfg:2") != std::string::npos);
    // An explicit 1 is consistent with the single-bit schemes.
    CHECK(error_of("scheme = independent\nheader_bits = 1\n").empty());
}

TEST_CASE("malformed input is rejected with position info") {
    CHECK(error_of("scheme = packet\nbogus_key = 3\n").find("test.cfg:2") !=
          std::string::npos);
    CHECK(error_of("scheme = packet\nbogus_key = 3\n").find("bogus_key") !=
          std::string::npos);
    CHECK(error_of("scheme = packet\nscheme = packet\n").find("duplicate") !=
          std::string::npos);
    CHECK(error_of("n_slots = 4\n").find("scheme") != std::string::npos);
    CHECK(error_of("scheme = packet\nn_slots\n").find("key = value") !=
          std::string::npos);
    CHECK(error_of("scheme = packet\nlearning_rate = fast\n")
              .find("expected a number") != std::string::npos);
    CHECK(error_of("scheme = packet\nn_devices = 8\nloading_factor = 1\n")
              .find("not both") != std::string::npos);
    CHECK(error_of("scheme = martian\n").find("martian") != std::string::npos);
}

TEST_CASE("one listed numeric key defines the sweep axis") {
    const auto parsed = parse_config_text(
        "scheme = independent, packet\n"
        "loading_factor = 0.5, 1.0, 1.5\n"
        "reps = 32\n");
    REQUIRE(std::holds_alternative<SweepSpec>(parsed));
    const auto& spec = std::get<SweepSpec>(parsed);
    CHECK(spec.axis == SweepAxis::LoadingFactor);
    CHECK(spec.grid == std::vector<double>{0.5, 1.0, 1.5});
    REQUIRE(spec.schemes.size() == 2);
    CHECK(spec.schemes[0].tag == Scheme::Independent);
    CHECK(spec.schemes[1].tag == Scheme::PacketBased);
    CHECK(spec.reps == 32);
}

TEST_CASE("several schemes without a list still make a one-point sweep") {
    const auto parsed =
        parse_config_text("scheme = independent, collaborative\nn_slots = 8\n");
    REQUIRE(std::holds_alternative<SweepSpec>(parsed));
    const auto& spec = std::get<SweepSpec>(parsed);
    CHECK(spec.grid.size() == 1);
    CHECK(spec.schemes.size() == 2);
    CHECK(spec.schemes[1].quant_bits == 4);
}

TEST_CASE("sweep-list misuse is rejected") {
    CHECK(error_of("scheme = packet\nn_devices = 1, 2\n")
              .find("does not accept a list") != std::string::npos);
    CHECK(error_of("scheme = packet\nloading_factor = 1, 2\npayload_bits = 1, 2\n")
              .find("only one key") != std::string::npos);
    CHECK(error_of("scheme = packet\nheader_bits = 1, 2\n")
              .find("collaborative") != std::string::npos);
    CHECK(error_of("scheme = packet\nseed = 1, 2\n")
              .find("does not accept a list") != std::string::npos);
}

TEST_CASE("header-bits list sweeps the quantizer width") {
    const auto parsed = parse_config_text(
        "scheme = collaborative\n"
        "n_slots = 4\n"
        "n_devices = 4\n"
        "packets_per_device = 2\n"
        "header_bits = 1, 2, 4\n"
        "reps = 8\n");
    REQUIRE(std::holds_alternative<SweepSpec>(parsed));
    const auto& spec = std::get<SweepSpec>(parsed);
    CHECK(spec.axis == SweepAxis::QuantBits);
    CHECK(spec.grid == std::vector<double>{1, 2, 4});

    const SweepResult result = run_sweep(spec);
    const std::string rows = csv_data_rows(result);
    CHECK(rows.find("collaborative_b1,header_bits,1,") != std::string::npos);
    CHECK(rows.find("collaborative_b2,header_bits,2,") != std::string::npos);
    CHECK(rows.find("collaborative_b4,header_bits,4,") != std::string::npos);
}

TEST_CASE("comments and blank lines are ignored") {
    const auto parsed = parse_config_text(
        "# scenario\n"
        "\n"
        "scheme = packet  # one-bit scheme\n"
        "seed = 42\n");
    const auto& run = std::get<RunConfig>(parsed);
    CHECK(run.config.seed == 42);
}

TEST_CASE("formatted config round-trips") {
    SimConfig cfg;
    cfg.scheme = Scheme::Collaborative;
    cfg.header_bits = 4;
    cfg.n_devices = 600;
    cfg.seed = 123456789;
    const std::string text = format_config(cfg, 50);
    const auto parsed = parse_config_text(text);
    REQUIRE(std::holds_alternative<RunConfig>(parsed));
    const auto& run = std::get<RunConfig>(parsed);
    CHECK(run.config.scheme == cfg.scheme);
    CHECK(run.config.header_bits == cfg.header_bits);
    CHECK(run.config.n_devices == cfg.n_devices);
    CHECK(run.config.n_slots == cfg.n_slots);
    CHECK(run.config.packets_per_device == cfg.packets_per_device);
    CHECK(run.config.learning_rate == cfg.learning_rate);
    CHECK(run.config.payload_bits == cfg.payload_bits);
    CHECK(run.config.max_frames == cfg.max_frames);
    CHECK(run.config.seed == cfg.seed);
    CHECK(run.reps == 50);
}

TEST_CASE("csv layout: manifest comments, header, sorted data rows") {
    SweepSpec spec;
    spec.base.n_slots = 4;
    spec.base.n_devices = 4;
    spec.base.packets_per_device = 2;
    spec.base.seed = 9;
    spec.axis = SweepAxis::LoadingFactor;
    spec.grid = {0.5, 1.0};
    spec.schemes = {RewardScheme::packet_based(), RewardScheme::independent()};
    spec.reps = 16;

    const SweepResult result = run_sweep(spec);
    RunManifest manifest = RunManifest::for_sweep(spec);

    std::ostringstream out;
    emit_csv(result, manifest, out);
    const std::string text = out.str();

    int comment_lines = 0;
    int data_lines = 0;
    bool header_seen = false;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            ++comment_lines;
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            CHECK(line ==
                  "scheme,axis_name,axis_value,n_devices,mean_throughput,"
                  "std_throughput,mean_latency_slots,std_latency_slots,"
                  "mean_finish_std,nonconverged,reps");
            continue;
        }
        ++data_lines;
        // Plain CSV after stripping comments: 11 columns.
        int commas = 0;
        for (char c : line) commas += (c == ',') ? 1 : 0;
        CHECK(commas == 10);
    }
    CHECK(comment_lines >= 5);
    CHECK(header_seen);
    CHECK(data_lines == 4);

    // Rows are sorted scheme-major (independent before packet), grid ascending.
    const std::string rows = csv_data_rows(result);
    CHECK(rows.find("independent,loading_factor,0.5") <
          rows.find("independent,loading_factor,1"));
    CHECK(rows.find("independent,") < rows.find("packet,"));

    // No timestamp line when unset; reruns are byte-identical.
    CHECK(text.find("timestamp") == std::string::npos);
    CHECK(csv_data_rows(run_sweep(spec)) == rows);
}

TEST_CASE("single-point sweep emits exactly one data row") {
    RunConfig run;
    run.config.n_slots = 3;
    run.config.n_devices = 2;
    run.config.packets_per_device = 1;
    run.config.scheme = Scheme::PacketBased;
    run.reps = 4;
    const SweepSpec spec = as_single_point_sweep(run);
    const SweepResult result = run_sweep(spec);
    CHECK(result.rows.size() == 1);
    std::ostringstream out;
    emit_csv(result, RunManifest::for_sweep(spec), out);
    const std::string rows = csv_data_rows(result);
    CHECK(rows.find("packet,loading_factor,") == 0);
}
