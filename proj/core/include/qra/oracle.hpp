#pragma once

#include <cstdint>

#include "qra/rewards.hpp"

namespace qra {

/// Exact expected total slots for tiny single-packet scenarios, solved by
/// enumerating the absorbing Markov chain over joint argmax-set states.
///
/// Validity rests on two facts about single-packet episodes:
///  - PacketBased: a collision's penalty factor is zero while the packet
///    is still pending, so rows stay all-zero and every active device
///    draws uniformly over all slots.
///  - Independent (and Collaborative when every possible collision maps
///    to one quantized level): all collision updates step toward the same
///    negative target, so a row's entries are ordered by how often each
///    slot has collided, and the argmax set is exactly the set of
///    least-collided slots. A learning rate of 1 would collapse that
///    ladder, hence the open-interval requirement.
struct OracleSpec {
    std::int32_t n_devices = 2;
    std::int32_t n_slots = 2;
    std::int32_t packets_per_device = 1;
    RewardScheme scheme = RewardScheme::packet_based();
    double alpha = 0.1;
};

/// Throws std::invalid_argument when the spec is outside the exactly
/// solvable domain (sizes above 3, multi-packet backlogs, degenerate
/// learning rates, collaborative cases with distinct collision levels,
/// or scenarios that never converge).
double markov_expected_slots(const OracleSpec& spec);

}  // namespace qra
