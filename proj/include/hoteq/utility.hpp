#pragma once
// Candidate utilities. Every voter votes for the nearest candidate; a voter
// exactly midway between two adjacent candidates splits 1/2-1/2. A candidate
// with neighbours l < s < r therefore captures the window
// [mu(l,s), mu(s,r)], each boundary counting half of any atom sitting on it;
// outermost candidates capture the unbounded side entirely.

#include "hoteq/measure.hpp"
#include "hoteq/model.hpp"
#include "hoteq/rational.hpp"

namespace hoteq {

// Midpoint of two finite positions.
Rat mu(const Rat& s, const Rat& t);

// Midpoint with sentinel absorption: mu_x(-inf, s) = -inf, mu_x(s, +inf) = +inf.
XPos mu_x(const XPos& s, const XPos& t);

struct UtilParts {
  Rat total;  // full captured mass
  Rat left;   // mass strictly left of the candidate within its window
  Rat right;  // mass strictly right of the candidate within its window
  // total = left + right + atom at the candidate's own position.
};

// Utility of a candidate at `s` whose adjacent occupied positions are
// left_nbr < s < right_nbr (sentinels for the outermost candidates).
// Utilities only depend on these immediate neighbours.
UtilParts util_window(const VoterModel& vm, const XPos& left_nbr, const Rat& s,
                      const XPos& right_nbr);

// Utility of candidate i (0-based) in profile S (strictly increasing).
UtilParts util(const VoterModel& vm, const Profile& S, int i);

// Utility of a new candidate entering at z, z not in S: the utility of z in
// S ∪ {z}. Throws std::invalid_argument if z occupies a taken position.
UtilParts utilout(const VoterModel& vm, const Profile& S, const Rat& z);

}  // namespace hoteq
