#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qra/rewards.hpp"
#include "qra/rng.hpp"

namespace qra {

/// Dense N x K preference table, all entries starting at zero. With a
/// learning rate in (0, 1] and update targets in [-1, 1], every entry
/// stays in [-1, 1].
///
/// Each row carries a cached (max, multiplicity, index) triple so the hot
/// path (pick an argmax slot, update that one entry) is O(1) for rows
/// whose maximum is unique. choose() draws exactly like select_slot():
/// zero draws on a unique maximum, one bounded draw on a tie.
class QTable {
public:
    QTable(std::int32_t n_devices, std::int32_t n_slots)
        : n_devices_(n_devices), n_slots_(n_slots) {
        if (n_devices < 1 || n_slots < 1) {
            throw std::invalid_argument("QTable: dimensions must be >= 1");
        }
        values_.assign(static_cast<std::size_t>(n_devices) * n_slots, 0.0);
        cache_.assign(static_cast<std::size_t>(n_devices),
                      RowCache{0.0, n_slots, 0});
    }

    std::int32_t device_count() const { return n_devices_; }
    std::int32_t slot_count() const { return n_slots_; }

    std::span<const double> row(std::int32_t device) const {
        return {values_.data() + static_cast<std::size_t>(device) * n_slots_,
                static_cast<std::size_t>(n_slots_)};
    }

    double at(std::int32_t device, std::int32_t slot) const {
        return values_[static_cast<std::size_t>(device) * n_slots_ + slot];
    }

    /// Argmax slot for `device`, ties broken uniformly.
    std::int32_t choose(std::int32_t device, Rng& rng) const {
        const RowCache& c = cache_[static_cast<std::size_t>(device)];
        if (c.max_count == 1) return c.argmax;
        const double* r =
            values_.data() + static_cast<std::size_t>(device) * n_slots_;
        std::int32_t want = static_cast<std::int32_t>(
            rng.bounded(static_cast<std::uint32_t>(c.max_count)));
        for (std::int32_t k = 0;; ++k) {
            if (r[k] == c.max_val && want-- == 0) return k;
        }
    }

    /// One learning step: q += alpha * (target - q) on a single entry.
    void apply(std::int32_t device, std::int32_t slot, double alpha,
               double target) {
        double& q = values_[static_cast<std::size_t>(device) * n_slots_ + slot];
        const double old = q;
        const double updated = apply_update(old, alpha, target);
        if (updated == old) return;
        q = updated;

        RowCache& c = cache_[static_cast<std::size_t>(device)];
        if (updated > c.max_val) {
            c = RowCache{updated, 1, slot};
            return;
        }
        if (old == c.max_val) {
            // A maximal entry decreased.
            if (c.max_count > 1) {
                if (--c.max_count == 1) relocate_argmax(device);
            } else {
                rescan(device);
            }
            return;
        }
        if (updated == c.max_val) ++c.max_count;
    }

    double row_max(std::int32_t device) const {
        return cache_[static_cast<std::size_t>(device)].max_val;
    }
    std::int32_t row_max_count(std::int32_t device) const {
        return cache_[static_cast<std::size_t>(device)].max_count;
    }

private:
    struct RowCache {
        double max_val;
        std::int32_t max_count;
        std::int32_t argmax;  // meaningful only when max_count == 1
    };

    void rescan(std::int32_t device) {
        const double* r =
            values_.data() + static_cast<std::size_t>(device) * n_slots_;
        double best = r[0];
        for (std::int32_t k = 1; k < n_slots_; ++k) {
            best = r[k] > best ? r[k] : best;
        }
        std::int32_t count = 0;
        std::int32_t first = 0;
        for (std::int32_t k = 0; k < n_slots_; ++k) {
            if (r[k] == best) {
                if (count == 0) first = k;
                ++count;
            }
        }
        cache_[static_cast<std::size_t>(device)] = RowCache{best, count, first};
    }

    void relocate_argmax(std::int32_t device) {
        RowCache& c = cache_[static_cast<std::size_t>(device)];
        const double* r =
            values_.data() + static_cast<std::size_t>(device) * n_slots_;
        for (std::int32_t k = 0; k < n_slots_; ++k) {
            if (r[k] == c.max_val) {
                c.argmax = k;
                return;
            }
        }
    }

    std::int32_t n_devices_;
    std::int32_t n_slots_;
    std::vector<double> values_;
    std::vector<RowCache> cache_;
};

}  // namespace qra
