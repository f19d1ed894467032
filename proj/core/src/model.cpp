#include "qra/model.hpp"

#include <stdexcept>
#include <string>

#include "qra/config.hpp"

namespace qra {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Independent: return "independent";
        case Scheme::Collaborative: return "collaborative";
        case Scheme::PacketBased: return "packet";
    }
    return "?";
}

void SimConfig::validate() const {
    if (n_devices < 1) throw std::invalid_argument("n_devices must be >= 1");
    if (n_slots < 1) throw std::invalid_argument("n_slots must be >= 1");
    if (packets_per_device < 1) {
        throw std::invalid_argument("packets_per_device must be >= 1");
    }
    if (!(learning_rate > 0.0) || learning_rate > 1.0) {
        throw std::invalid_argument("learning_rate must be in (0, 1]");
    }
    if (payload_bits < 1) throw std::invalid_argument("payload_bits must be >= 1");
    if (header_bits < 1 || header_bits > 30) {
        throw std::invalid_argument("header_bits must be in [1, 30]");
    }
    if (scheme != Scheme::Collaborative && header_bits != 1) {
        throw std::invalid_argument(
            std::string("header_bits must be 1 for scheme ") + scheme_name(scheme));
    }
    if (max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
}

std::int32_t select_slot(std::span<const double> q_row, Rng& rng) {
    if (q_row.empty()) throw std::invalid_argument("select_slot: empty row");
    double best = q_row[0];
    for (double v : q_row) best = v > best ? v : best;
    std::int32_t count = 0;
    std::int32_t first = 0;
    for (std::size_t k = 0; k < q_row.size(); ++k) {
        if (q_row[k] == best) {
            if (count == 0) first = static_cast<std::int32_t>(k);
            ++count;
        }
    }
    if (count == 1) return first;
    std::int32_t want = static_cast<std::int32_t>(
        rng.bounded(static_cast<std::uint32_t>(count)));
    for (std::size_t k = 0;; ++k) {
        if (q_row[k] == best && want-- == 0) return static_cast<std::int32_t>(k);
    }
}

std::vector<std::vector<std::int32_t>> build_occupancy(
    std::span<const std::int32_t> choices, std::int32_t n_slots) {
    std::vector<std::vector<std::int32_t>> occupancy(
        static_cast<std::size_t>(n_slots));
    for (std::size_t n = 0; n < choices.size(); ++n) {
        const std::int32_t c = choices[n];
        if (c < 0) continue;
        if (c >= n_slots) {
            throw std::invalid_argument("build_occupancy: choice out of range");
        }
        occupancy[static_cast<std::size_t>(c)].push_back(
            static_cast<std::int32_t>(n));
    }
    return occupancy;
}

}  // namespace qra
