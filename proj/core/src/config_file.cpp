#include "qra/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace qra {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

struct RawValue {
    std::vector<std::string> items;  // comma-separated pieces, trimmed
    int line = 0;
};

[[noreturn]] void fail(std::string_view origin, int line, const std::string& msg) {
    std::ostringstream out;
    out << origin << ":" << line << ": " << msg;
    throw ConfigError(out.str());
}

double parse_real(std::string_view origin, int line, const std::string& key,
                  const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(origin, line, key + ": expected a number, got '" + text + "'");
    }
}

std::int64_t parse_int(std::string_view origin, int line, const std::string& key,
                       const std::string& text) {
    std::int64_t v = 0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(origin, line, key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_seed(std::string_view origin, int line,
                         const std::string& text) {
    std::uint64_t v = 0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(origin, line, "seed: expected an unsigned integer, got '" + text + "'");
    }
    return v;
}

std::optional<Scheme> parse_scheme_name(std::string_view name) {
    if (name == "independent") return Scheme::Independent;
    if (name == "collaborative") return Scheme::Collaborative;
    if (name == "packet" || name == "packet_based" || name == "packet-based") {
        return Scheme::PacketBased;
    }
    return std::nullopt;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "scheme",        "n_devices",   "loading_factor",
        "n_slots",       "packets_per_device", "learning_rate",
        "payload_bits",  "header_bits", "max_frames",
        "reps",          "seed"};
    return keys;
}

}  // namespace

ParsedInput parse_config_text(std::string_view text, std::string_view origin) {
    std::map<std::string, RawValue> values;
    {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(
                pos, eol == std::string_view::npos ? std::string_view::npos
                                                   : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;

            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) continue;

            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) {
                fail(origin, line_no, "expected 'key = value'");
            }
            std::string key{trim(line.substr(0, eq))};
            if (std::find(known_keys().begin(), known_keys().end(), key) ==
                known_keys().end()) {
                fail(origin, line_no, "unknown key '" + key + "'");
            }
            if (values.contains(key)) {
                fail(origin, line_no, "duplicate key '" + key + "'");
            }

            RawValue raw;
            raw.line = line_no;
            std::string_view rest = trim(line.substr(eq + 1));
            if (rest.empty()) fail(origin, line_no, key + ": empty value");
            while (true) {
                const std::size_t comma = rest.find(',');
                raw.items.emplace_back(
                    trim(rest.substr(0, comma)));
                if (raw.items.back().empty()) {
                    fail(origin, line_no, key + ": empty list entry");
                }
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
            values[key] = std::move(raw);
        }
    }

    auto line_of = [&](const std::string& key) {
        return values.at(key).line;
    };

    // Schemes.
    if (!values.contains("scheme")) {
        fail(origin, 0, "missing key 'scheme'");
    }
    std::vector<Scheme> scheme_tags;
    for (const auto& item : values.at("scheme").items) {
        const auto s = parse_scheme_name(item);
        if (!s) {
            fail(origin, line_of("scheme"),
                 "scheme: expected independent | collaborative | packet, got '" +
                     item + "'");
        }
        if (std::find(scheme_tags.begin(), scheme_tags.end(), *s) !=
            scheme_tags.end()) {
            fail(origin, line_of("scheme"), "scheme: duplicate entry '" + item + "'");
        }
        scheme_tags.push_back(*s);
    }

    if (values.contains("n_devices") && values.contains("loading_factor")) {
        fail(origin, line_of("loading_factor"),
             "give either n_devices or loading_factor, not both");
    }

    // Scalar keys may not carry lists; one numeric key may, and it
    // becomes the sweep axis.
    static const std::map<std::string, SweepAxis> sweepable = {
        {"loading_factor", SweepAxis::LoadingFactor},
        {"packets_per_device", SweepAxis::PacketsPerDevice},
        {"payload_bits", SweepAxis::PayloadBits},
        {"header_bits", SweepAxis::QuantBits},
        {"learning_rate", SweepAxis::LearningRate},
    };
    std::optional<SweepAxis> axis;
    std::string axis_key_name;
    for (const auto& [key, raw] : values) {
        if (key == "scheme" || raw.items.size() == 1) continue;
        const auto it = sweepable.find(key);
        if (it == sweepable.end()) {
            fail(origin, raw.line, key + ": does not accept a list");
        }
        if (axis) {
            fail(origin, raw.line,
                 "only one key may carry a sweep list (already sweeping " +
                     axis_key_name + ")");
        }
        axis = it->second;
        axis_key_name = key;
    }

    auto scalar_real = [&](const std::string& key, double fallback) {
        if (!values.contains(key)) return fallback;
        const auto& raw = values.at(key);
        return parse_real(origin, raw.line, key, raw.items.front());
    };
    auto scalar_int = [&](const std::string& key, std::int64_t fallback) {
        if (!values.contains(key)) return fallback;
        const auto& raw = values.at(key);
        return parse_int(origin, raw.line, key, raw.items.front());
    };

    SimConfig cfg;
    cfg.n_slots = static_cast<std::int32_t>(scalar_int("n_slots", 400));
    cfg.packets_per_device =
        static_cast<std::int32_t>(scalar_int("packets_per_device", 100));
    cfg.learning_rate = scalar_real("learning_rate", 0.1);
    cfg.payload_bits = static_cast<std::int32_t>(scalar_int("payload_bits", 64));
    cfg.max_frames = scalar_int("max_frames", 1'000'000);
    if (values.contains("seed")) {
        cfg.seed = parse_seed(origin, line_of("seed"), values.at("seed").items.front());
    }
    const auto reps = static_cast<std::int32_t>(scalar_int("reps", 200));
    if (reps < 1) fail(origin, values.contains("reps") ? line_of("reps") : 0,
                       "reps must be >= 1");

    // Device count: explicit, via loading factor, or fully loaded (N = K).
    if (values.contains("n_devices")) {
        cfg.n_devices = static_cast<std::int32_t>(scalar_int("n_devices", 0));
    } else if (values.contains("loading_factor") &&
               axis != SweepAxis::LoadingFactor) {
        cfg.n_devices = devices_for_loading(
            scalar_real("loading_factor", 1.0), cfg.n_slots);
    } else {
        cfg.n_devices = cfg.n_slots;
    }

    // Header bits: collaborative takes 4 unless given; the single-bit
    // schemes only ever accept 1.
    const bool has_collaborative =
        std::find(scheme_tags.begin(), scheme_tags.end(),
                  Scheme::Collaborative) != scheme_tags.end();
    std::int32_t collab_bits = 4;
    if (values.contains("header_bits") && axis != SweepAxis::QuantBits) {
        const auto b = static_cast<std::int32_t>(scalar_int("header_bits", 1));
        if (!has_collaborative && b != 1) {
            fail(origin, line_of("header_bits"),
                 "header_bits must be 1 for independent/packet schemes");
        }
        collab_bits = b;
    }
    if (axis == SweepAxis::QuantBits && !has_collaborative) {
        fail(origin, line_of("header_bits"),
             "header_bits can only be swept for the collaborative scheme");
    }

    std::vector<RewardScheme> schemes;
    for (Scheme tag : scheme_tags) {
        switch (tag) {
            case Scheme::Independent:
                schemes.push_back(RewardScheme::independent());
                break;
            case Scheme::PacketBased:
                schemes.push_back(RewardScheme::packet_based());
                break;
            case Scheme::Collaborative:
                schemes.push_back(RewardScheme::collaborative(collab_bits));
                break;
        }
    }

    auto validated = [&](SimConfig c, Scheme tag, std::int32_t bits) {
        c.scheme = tag;
        c.header_bits = tag == Scheme::Collaborative ? bits : 1;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            fail(origin, 0, e.what());
        }
        return c;
    };

    if (!axis) {
        if (schemes.size() != 1) {
            SweepSpec spec;
            spec.base = validated(cfg, schemes.front().tag,
                                  schemes.front().quant_bits);
            spec.axis = SweepAxis::LoadingFactor;
            spec.grid = {cfg.loading_factor()};
            spec.schemes = schemes;
            spec.reps = reps;
            spec.validate();
            return spec;
        }
        RunConfig run;
        run.config = validated(cfg, schemes.front().tag, schemes.front().quant_bits);
        run.reps = reps;
        return run;
    }

    SweepSpec spec;
    spec.axis = *axis;
    spec.reps = reps;
    spec.schemes = schemes;
    const auto& raw_axis = values.at(axis_key_name);
    for (const auto& item : raw_axis.items) {
        spec.grid.push_back(parse_real(origin, raw_axis.line, axis_key_name, item));
    }
    spec.base = cfg;
    spec.base.scheme = schemes.front().tag;
    spec.base.header_bits = schemes.front().header_bits();
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(origin, raw_axis.line, e.what());
    }
    return spec;
}

ParsedInput parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

std::string format_config(const SimConfig& cfg, std::int32_t reps) {
    std::ostringstream out;
    out.precision(12);
    out << "scheme = " << scheme_name(cfg.scheme) << "\n";
    out << "n_devices = " << cfg.n_devices << "\n";
    out << "n_slots = " << cfg.n_slots << "\n";
    out << "packets_per_device = " << cfg.packets_per_device << "\n";
    out << "learning_rate = " << cfg.learning_rate << "\n";
    out << "payload_bits = " << cfg.payload_bits << "\n";
    out << "header_bits = " << cfg.header_bits << "\n";
    out << "max_frames = " << cfg.max_frames << "\n";
    out << "reps = " << reps << "\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

SweepSpec as_single_point_sweep(const RunConfig& run) {
    SweepSpec spec;
    spec.base = run.config;
    spec.axis = SweepAxis::LoadingFactor;
    spec.grid = {run.config.loading_factor()};
    spec.schemes = {RewardScheme::from_config(run.config)};
    spec.reps = run.reps;
    spec.validate();
    return spec;
}

}  // namespace qra
