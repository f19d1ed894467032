#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "qra/sweep.hpp"

namespace qra {

/// Parse or validation failure; the message carries origin, line number
/// and the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A config file with only scalar values: one scenario, run `reps` times.
struct RunConfig {
    SimConfig config;
    std::int32_t reps = 200;
};

using ParsedInput = std::variant<RunConfig, SweepSpec>;

/// Parses the flat `key = value` config format. A comma-separated list in
/// exactly one numeric key turns the file into a sweep over that axis;
/// `scheme` may always list several schemes. Unknown keys, duplicate
/// keys, several list-valued numeric keys, and invariant violations are
/// rejected with the offending line.
ParsedInput parse_config_text(std::string_view text,
                              std::string_view origin = "<config>");

ParsedInput parse_config_file(const std::filesystem::path& path);

/// Canonical text form of a scalar config; parse_config_text on the
/// output reproduces the same validated values.
std::string format_config(const SimConfig& cfg, std::int32_t reps);

/// Widens a scalar run into the equivalent one-point sweep (the loading
/// factor axis with the config's own N/K as its only grid value).
SweepSpec as_single_point_sweep(const RunConfig& run);

}  // namespace qra
