#pragma once
// Equilibrium verification. A profile S is a pure equilibrium iff no single
// candidate can strictly increase its captured mass by moving anywhere legal;
// the ε-relaxation tolerates improvements of at most ε. Two independent
// routes are implemented:
//   * condition route — every candidate is a best response within its own
//     merged gap, and the minimum utility is at least the largest entrant
//     value over all m+1 gaps (minus ε);
//   * direct route — literally try every candidate against every gap of the
//     others (finite spaces: every unoccupied point).
// The two agree (this is asserted in the tests); the direct route supplies
// the witness.

#include <cstdint>
#include <optional>
#include <vector>

#include "hoteq/deviation.hpp"
#include "hoteq/model.hpp"

namespace hoteq {

// A strictly-improving (by more than ε) move found by verification.
struct DeviationWitness {
  int candidate = 0;               // 0-based index of the mover
  Rat position;                    // a concrete legal landing position
  std::optional<Piece> piece;      // attaining piece (atomic continuous gaps)
  Rat value;                       // entrant value at/near the landing point
  Rat gain;                        // value - util(candidate)
};

struct VerificationReport {
  bool ok = false;                  // equilibrium (within ε)?
  std::vector<Rat> utilities;       // per-candidate captured mass
  Rat min_utility;                  // smallest entry of `utilities`
  Rat max_gap_value;                // largest entrant value over the m+1 gaps
  std::optional<DeviationWitness> witness;  // present iff !ok
};

// ε = 0: exact equilibrium test.
VerificationReport is_equilibrium(const Profile& S, const Instance& inst);
VerificationReport is_eps_equilibrium(const Profile& S, const Instance& inst,
                                      const Rat& eps);

// All equilibria of a finite-space instance by plain enumeration of the
// C(n, m) profiles, each checked through the direct definition only.
// Throws InstanceError when C(n, m) exceeds `enumeration_bound`.
std::vector<Profile> brute_force_solve(const Instance& inst,
                                       std::uint64_t enumeration_bound = 1000000);

// For every candidate at a dyadic position of level L >= 1: substituting any
// dyadic position of level <= L-1 from the candidate's open neighbour gap
// (within [0, R]) must break the equilibrium. True iff all substitutions
// break. Requires an Interval instance and a fully dyadic profile.
bool lower_bit_check(const Profile& S, const Instance& inst);

}  // namespace hoteq
