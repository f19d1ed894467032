#include "qra/oracle.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace qra {

namespace {

constexpr int kMaxSize = 3;

struct ChainBuilder {
    int n;              // devices
    int k;              // slots
    bool ladder;        // collisions shrink the argmax set (vs. leave it)
    unsigned full_mask;

    // State key: 3 bits of argmax-set mask per device; 0 = finished.
    unsigned encode(const std::vector<unsigned>& masks) const {
        unsigned key = 0;
        for (int d = 0; d < n; ++d) key |= masks[static_cast<std::size_t>(d)] << (3 * d);
        return key;
    }
    std::vector<unsigned> decode(unsigned key) const {
        std::vector<unsigned> masks(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) masks[static_cast<std::size_t>(d)] = (key >> (3 * d)) & 7u;
        return masks;
    }

    /// All (next state, probability) pairs from `key`, enumerating every
    /// joint slot choice of the active devices.
    std::map<unsigned, double> transitions(unsigned key) const {
        const std::vector<unsigned> masks = decode(key);
        std::vector<int> active;
        std::vector<std::vector<int>> options;
        double denom = 1.0;
        for (int d = 0; d < n; ++d) {
            const unsigned m = masks[static_cast<std::size_t>(d)];
            if (m == 0) continue;
            active.push_back(d);
            std::vector<int> slots;
            for (int s = 0; s < k; ++s) {
                if (m & (1u << s)) slots.push_back(s);
            }
            denom *= static_cast<double>(slots.size());
            options.push_back(std::move(slots));
        }

        std::map<unsigned, double> out;
        const double p = 1.0 / denom;
        std::vector<std::size_t> idx(active.size(), 0);
        while (true) {
            int occupancy[kMaxSize] = {0, 0, 0};
            for (std::size_t i = 0; i < active.size(); ++i) {
                occupancy[options[i][idx[i]]]++;
            }
            std::vector<unsigned> next = masks;
            for (std::size_t i = 0; i < active.size(); ++i) {
                const int d = active[i];
                const int slot = options[i][idx[i]];
                unsigned& m = next[static_cast<std::size_t>(d)];
                if (occupancy[slot] == 1) {
                    m = 0;  // single packet delivered; device leaves
                } else if (ladder) {
                    m &= ~(1u << slot);
                    if (m == 0) m = full_mask;
                }
            }
            out[encode(next)] += p;

            std::size_t pos = 0;
            while (pos < idx.size()) {
                if (++idx[pos] < options[pos].size()) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos == idx.size()) break;
        }
        return out;
    }
};

}  // namespace

double markov_expected_slots(const OracleSpec& spec) {
    if (spec.n_devices < 1 || spec.n_devices > kMaxSize) {
        throw std::invalid_argument("oracle: n_devices must be in [1, 3]");
    }
    if (spec.n_slots < 1 || spec.n_slots > kMaxSize) {
        throw std::invalid_argument("oracle: n_slots must be in [1, 3]");
    }
    if (spec.packets_per_device != 1) {
        throw std::invalid_argument("oracle: only single-packet backlogs solve exactly");
    }
    if (!(spec.alpha > 0.0) || spec.alpha > 1.0) {
        throw std::invalid_argument("oracle: alpha must be in (0, 1]");
    }

    bool ladder = false;
    switch (spec.scheme.tag) {
        case Scheme::PacketBased:
            ladder = false;  // zero penalty factor: rows stay all-zero
            break;
        case Scheme::Independent:
            ladder = true;
            break;
        case Scheme::Collaborative: {
            // Exact only when every collision size quantizes to one level.
            double level = 0.0;
            for (int m = 2; m <= spec.n_devices; ++m) {
                const double q = quantize_congestion(
                    congestion_level(m, spec.n_devices), spec.scheme.quant_bits);
                if (m == 2) {
                    level = q;
                } else if (q != level) {
                    throw std::invalid_argument(
                        "oracle: collaborative collision levels differ; "
                        "argmax-set state is not exact");
                }
            }
            ladder = true;
            break;
        }
    }
    if (ladder && spec.alpha >= 1.0) {
        throw std::invalid_argument(
            "oracle: alpha = 1 collapses the penalty ladder");
    }

    ChainBuilder chain;
    chain.n = spec.n_devices;
    chain.k = spec.n_slots;
    chain.ladder = ladder;
    chain.full_mask = (1u << spec.n_slots) - 1u;

    const unsigned start = chain.encode(std::vector<unsigned>(
        static_cast<std::size_t>(spec.n_devices), chain.full_mask));
    const unsigned absorbing = 0;

    // Forward reachability with memoized transitions.
    std::map<unsigned, std::map<unsigned, double>> graph;
    std::vector<unsigned> frontier{start};
    graph[start] = {};
    while (!frontier.empty()) {
        const unsigned key = frontier.back();
        frontier.pop_back();
        if (key == absorbing) continue;
        auto trans = chain.transitions(key);
        for (const auto& [next, prob] : trans) {
            (void)prob;
            if (!graph.contains(next)) {
                graph[next] = {};
                frontier.push_back(next);
            }
        }
        graph[key] = std::move(trans);
    }

    // Every reachable state must be able to reach absorption, otherwise
    // the expectation diverges.
    std::map<unsigned, bool> reaches;
    for (const auto& [key, _] : graph) reaches[key] = (key == absorbing);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [key, trans] : graph) {
            if (reaches[key]) continue;
            for (const auto& [next, prob] : trans) {
                (void)prob;
                if (reaches[next]) {
                    reaches[key] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (const auto& [key, ok] : reaches) {
        (void)key;
        if (!ok) {
            throw std::invalid_argument(
                "oracle: scenario never converges (expected slots diverge)");
        }
    }

    // Expected frames to absorption: (I - P) x = 1 over transient states.
    std::vector<unsigned> transient;
    std::map<unsigned, std::size_t> index;
    for (const auto& [key, _] : graph) {
        if (key == absorbing) continue;
        index[key] = transient.size();
        transient.push_back(key);
    }
    const std::size_t m = transient.size();
    if (m == 0) return 0.0;

    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        a[i][i] = 1.0;
        a[i][m] = 1.0;
        for (const auto& [next, prob] : graph[transient[i]]) {
            if (next == absorbing) continue;
            a[i][index[next]] -= prob;
        }
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    const double expected_frames = a[index[start]][m] / a[index[start]][index[start]];
    return expected_frames * static_cast<double>(spec.n_slots);
}

}  // namespace qra
