#include "qra/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qra/version.hpp"

namespace qra {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<SweepRow> sorted_rows(const SweepResult& result) {
    std::vector<SweepRow> rows = result.rows;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         if (a.scheme.tag != b.scheme.tag) {
                             return a.scheme.tag < b.scheme.tag;
                         }
                         if (a.scheme.quant_bits != b.scheme.quant_bits) {
                             return a.scheme.quant_bits < b.scheme.quant_bits;
                         }
                         return a.axis_value < b.axis_value;
                     });
    return rows;
}

void write_rows(const SweepResult& result, std::ostream& out) {
    for (const auto& row : sorted_rows(result)) {
        out << row.scheme.label() << ',' << axis_key(result.axis) << ','
            << fmt(row.axis_value) << ',' << row.n_devices << ','
            << fmt(row.mean_throughput) << ',' << fmt(row.std_throughput) << ','
            << fmt(row.mean_latency) << ',' << fmt(row.std_latency) << ','
            << fmt(row.mean_finish_std) << ',' << row.nonconverged << ','
            << row.reps << '\n';
    }
}

}  // namespace

RunManifest RunManifest::for_sweep(const SweepSpec& spec) {
    RunManifest m;
    m.tool_version = std::string(kVersion);
    m.seed = spec.base.seed;

    std::string schemes;
    for (const auto& s : spec.schemes) {
        if (!schemes.empty()) schemes += ", ";
        schemes += s.label();
    }
    std::string grid;
    for (double v : spec.grid) {
        if (!grid.empty()) grid += ", ";
        grid += fmt(v);
    }

    m.entries = {
        {"axis", axis_key(spec.axis)},
        {"grid", grid},
        {"schemes", schemes},
        {"n_slots", std::to_string(spec.base.n_slots)},
        {"n_devices", std::to_string(spec.base.n_devices)},
        {"packets_per_device", std::to_string(spec.base.packets_per_device)},
        {"learning_rate", fmt(spec.base.learning_rate)},
        {"payload_bits", std::to_string(spec.base.payload_bits)},
        {"max_frames", std::to_string(spec.base.max_frames)},
        {"reps", std::to_string(spec.reps)},
    };
    return m;
}

void emit_csv(const SweepResult& result, const RunManifest& manifest,
              std::ostream& out) {
    if (result.rows.empty()) {
        throw std::invalid_argument("emit_csv: empty result");
    }
    out << "# qra " << manifest.tool_version << '\n';
    if (!manifest.timestamp.empty()) {
        out << "# timestamp = " << manifest.timestamp << '\n';
    }
    out << "# seed = " << manifest.seed << '\n';
    for (const auto& [key, value] : manifest.entries) {
        out << "# " << key << " = " << value << '\n';
    }
    out << "scheme,axis_name,axis_value,n_devices,mean_throughput,"
           "std_throughput,mean_latency_slots,std_latency_slots,"
           "mean_finish_std,nonconverged,reps\n";
    write_rows(result, out);
}

void emit_csv_file(const SweepResult& result, const RunManifest& manifest,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + path.string());
    }
    emit_csv(result, manifest, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string csv_data_rows(const SweepResult& result) {
    std::ostringstream out;
    write_rows(result, out);
    return out.str();
}

}  // namespace qra
