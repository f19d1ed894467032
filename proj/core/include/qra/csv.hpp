#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qra/sweep.hpp"

namespace qra {

/// Provenance block embedded as '#' comment lines at the top of every
/// output file, so results are self-describing.
struct RunManifest {
    std::string tool_version;
    std::uint64_t seed = 0;
    std::string timestamp;  // empty = omit the line (stable output for diffs)
    std::vector<std::pair<std::string, std::string>> entries;

    static RunManifest for_sweep(const SweepSpec& spec);
};

/// Writes manifest comments, a header row, then one data row per
/// (scheme, grid value), ordered by scheme then axis value. Numeric
/// columns carry nine significant digits; identical results serialize to
/// byte-identical data rows.
void emit_csv(const SweepResult& result, const RunManifest& manifest,
              std::ostream& out);

/// Same, to a file. Throws std::runtime_error naming the path when it
/// cannot be opened for writing.
void emit_csv_file(const SweepResult& result, const RunManifest& manifest,
                   const std::filesystem::path& path);

/// Just the data rows (no manifest, no header); byte-comparable.
std::string csv_data_rows(const SweepResult& result);

}  // namespace qra
