// qra: Monte Carlo simulator for reward-based random access in slotted
// mMTC frames.
//
//   qra run    --config scenario.cfg [--seed S] [--reps R] [--out file.csv]
//   qra sweep  --preset fig3 | --config sweep.cfg [--reps R] [--seed S] [--out file.csv]
//   qra oracle --n 2 --k 2 --scheme packet [--alpha A] [--bits B]
//
// Exit codes: 0 ok; 1 usage or config error; 2 the run finished but some
// sweep point had episodes that hit the frame cap (results still written).

#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qra/config_file.hpp"
#include "qra/csv.hpp"
#include "qra/engine.hpp"
#include "qra/oracle.hpp"
#include "qra/sweep.hpp"
#include "qra/version.hpp"

namespace {

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int write_result(const qra::SweepSpec& spec, const qra::SweepResult& result,
                 const std::optional<std::string>& out_path) {
    qra::RunManifest manifest = qra::RunManifest::for_sweep(spec);
    manifest.timestamp = utc_timestamp();
    if (out_path) {
        qra::emit_csv_file(result, manifest, *out_path);
    } else {
        qra::emit_csv(result, manifest, std::cout);
    }
    for (const auto& row : result.rows) {
        if (row.nonconverged > 0) {
            std::cerr << "warning: " << row.nonconverged << "/" << row.reps
                      << " episodes hit the frame cap at " << axis_key(result.axis)
                      << "=" << row.axis_value << " (" << row.scheme.label()
                      << ")\n";
        }
    }
    for (const auto& row : result.rows) {
        if (row.nonconverged > 0) return 2;
    }
    return 0;
}

std::optional<qra::Scheme> scheme_from_name(const std::string& name) {
    if (name == "independent") return qra::Scheme::Independent;
    if (name == "collaborative") return qra::Scheme::Collaborative;
    if (name == "packet" || name == "packet_based" || name == "packet-based") {
        return qra::Scheme::PacketBased;
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Q-learning random access simulator"};
    app.set_version_flag("--version", std::string(qra::kVersion));
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand(
        "run", "Run one scenario for a number of independent episodes");
    std::string run_config_path;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::int32_t> run_reps;
    std::optional<std::string> run_out;
    int run_workers = 1;
    run_cmd->add_option("--config", run_config_path, "scenario config file")
        ->required();
    run_cmd->add_option("--seed", run_seed, "master seed override");
    run_cmd->add_option("--reps", run_reps, "episode count override");
    run_cmd->add_option("--out", run_out, "output CSV path (default: stdout)");
    run_cmd->add_option("--workers", run_workers, "parallel episode workers");

    // sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Sweep a parameter grid and aggregate");
    std::string sweep_preset_name;
    std::string sweep_config_path;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::int32_t> sweep_reps;
    std::optional<std::string> sweep_out;
    int sweep_workers = 1;
    auto* preset_opt = sweep_cmd->add_option("--preset", sweep_preset_name,
                                             "built-in sweep: fig2..fig7");
    auto* config_opt =
        sweep_cmd->add_option("--config", sweep_config_path, "sweep config file");
    preset_opt->excludes(config_opt);
    sweep_cmd->add_option("--seed", sweep_seed, "master seed override");
    sweep_cmd->add_option("--reps", sweep_reps, "episodes per grid point");
    sweep_cmd->add_option("--out", sweep_out, "output CSV path (default: stdout)");
    sweep_cmd->add_option("--workers", sweep_workers, "parallel episode workers");

    // oracle
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "Exact expected total slots for tiny single-packet cases");
    int oracle_n = 2;
    int oracle_k = 2;
    std::string oracle_scheme = "packet";
    double oracle_alpha = 0.1;
    int oracle_bits = 4;
    oracle_cmd->add_option("--n", oracle_n, "devices (1..3)")->required();
    oracle_cmd->add_option("--k", oracle_k, "slots per frame (1..3)")->required();
    oracle_cmd->add_option("--scheme", oracle_scheme,
                           "independent | collaborative | packet")
        ->required();
    oracle_cmd->add_option("--alpha", oracle_alpha, "learning rate");
    oracle_cmd->add_option("--bits", oracle_bits, "collaborative header bits");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            qra::ParsedInput parsed = qra::parse_config_file(run_config_path);
            if (std::holds_alternative<qra::SweepSpec>(parsed)) {
                std::cerr << "error: " << run_config_path
                          << " defines a sweep; use `qra sweep --config`\n";
                return 1;
            }
            qra::RunConfig run = std::get<qra::RunConfig>(parsed);
            if (run_seed) run.config.seed = *run_seed;
            if (run_reps) run.reps = *run_reps;
            qra::SweepSpec spec = qra::as_single_point_sweep(run);
            const qra::SweepResult result =
                qra::run_sweep(spec, qra::RunOptions{run_workers});
            return write_result(spec, result, run_out);
        }

        if (*sweep_cmd) {
            qra::SweepSpec spec;
            if (!sweep_preset_name.empty()) {
                const auto which = qra::parse_preset(sweep_preset_name);
                if (!which) {
                    std::cerr << "error: unknown preset '" << sweep_preset_name
                              << "' (expected fig2..fig7)\n";
                    return 1;
                }
                spec = qra::preset(*which);
            } else if (!sweep_config_path.empty()) {
                qra::ParsedInput parsed = qra::parse_config_file(sweep_config_path);
                if (std::holds_alternative<qra::SweepSpec>(parsed)) {
                    spec = std::get<qra::SweepSpec>(parsed);
                } else {
                    spec = qra::as_single_point_sweep(
                        std::get<qra::RunConfig>(parsed));
                }
            } else {
                std::cerr << "error: sweep needs --preset or --config\n";
                return 1;
            }
            if (sweep_seed) spec.base.seed = *sweep_seed;
            if (sweep_reps) spec.reps = *sweep_reps;
            const qra::SweepResult result =
                qra::run_sweep(spec, qra::RunOptions{sweep_workers});
            return write_result(spec, result, sweep_out);
        }

        // oracle
        const auto tag = scheme_from_name(oracle_scheme);
        if (!tag) {
            std::cerr << "error: unknown scheme '" << oracle_scheme << "'\n";
            return 1;
        }
        qra::OracleSpec spec;
        spec.n_devices = oracle_n;
        spec.n_slots = oracle_k;
        spec.alpha = oracle_alpha;
        switch (*tag) {
            case qra::Scheme::Independent:
                spec.scheme = qra::RewardScheme::independent();
                break;
            case qra::Scheme::Collaborative:
                spec.scheme = qra::RewardScheme::collaborative(oracle_bits);
                break;
            case qra::Scheme::PacketBased:
                spec.scheme = qra::RewardScheme::packet_based();
                break;
        }
        const double expected = qra::markov_expected_slots(spec);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", expected);
        std::string text(buf);
        if (text.find('.') == std::string::npos &&
            text.find('e') == std::string::npos) {
            text += ".0";
        }
        std::cout << text << "\n";
        return 0;
    } catch (const qra::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
