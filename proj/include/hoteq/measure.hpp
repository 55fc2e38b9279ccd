#pragma once
// Exact mass computations over a VoterModel: cdf, interval mass, the
// "split cdf" used by all window utilities, pointwise density, and the
// inverse-cdf cut operation.

#include "hoteq/model.hpp"
#include "hoteq/rational.hpp"

namespace hoteq {

// Mass of the atom exactly at x (0 if none).
Rat atom_mass_at(const VoterModel& vm, const Rat& x);

// Total voter mass W (atoms + integral of the density).
Rat total_mass(const VoterModel& vm);

// Mass of positions <= z (closed cdf).
Rat cdf(const VoterModel& vm, const Rat& z);

// Mass strictly below x plus HALF the atom at x. This is the weight function
// of window boundaries: a window [a, b] with two-way midpoint ties is worth
// split_cdf(b) - split_cdf(a). Extends to sentinels: -inf -> 0, +inf -> W.
Rat split_cdf(const VoterModel& vm, const XPos& x);

// Mass of the closed interval [a, b] (0 if a > b); sentinels allowed.
Rat mass(const VoterModel& vm, const XPos& a, const XPos& b);

// Pointwise density value f(x) (0 outside the density support).
Rat density_value(const VoterModel& vm, const Rat& x);

// Integral of the density part alone up to t / in total (atoms excluded).
Rat density_cdf(const VoterModel& vm, const Rat& t);
Rat density_total(const VoterModel& vm);

// Result of cut(z, v): the smallest y >= z with cdf(y) - cdf(z) = v.
//   reached  — such a y exists (always true for pure densities with enough
//              remaining mass; false when an atom jump skips v or mass runs
//              out, in which case lo = hi = right end of the voter support).
//   exact    — lo == hi is the exact rational answer; otherwise [lo, hi] is a
//              dyadic bracket of width <= 2^-60 around the (irrational) root.
struct CutResult {
  Rat lo;
  Rat hi;
  bool exact = true;
  bool reached = true;
};

CutResult cut(const VoterModel& vm, const Rat& z, const Rat& v);

// Instance-level wrapper: validates 0 <= z <= R and v >= 0, and pins the
// no-solution case (reached == false) to the instance's right end R.
CutResult cut(const Instance& inst, const Rat& z, const Rat& v);

// Rightmost position carrying any mass (atom or density support end).
Rat support_end(const VoterModel& vm);
// Leftmost position carrying any mass.
Rat support_begin(const VoterModel& vm);

}  // namespace hoteq
