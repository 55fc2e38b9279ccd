#pragma once
// Dyadic canonicalization of equilibria on [0, R] with integer voter atoms,
// the dyadic-grid exact solver, and the hard-instance family generator.
//
// bit(i) is the grid {k / 2^i} ∩ [0, R]. The canonicalizer walks levels
// i = 1, 2, ... and pushes the leftmost candidate not on bit(i-1) rightwards
// toward the next bit(i-1) point x, either directly (possibly leap-frogging
// its right neighbour to x - ε/2 first, ε = 2^-i), or — when blocked — by
// first relocating a chain of candidates found through double reflections of
// neighbour positions through voter atoms. Every single-candidate move is
// re-verified; the result is an equilibrium on a coarse dyadic grid.

#include <optional>
#include <string>
#include <vector>

#include "hoteq/model.hpp"
#include "hoteq/verify.hpp"

namespace hoteq {

// Mirror image of x through p.
Rat reflect(const Rat& x, const Rat& p);

// b  = single reflections of x through each voter atom.
// b2 = double reflections 2q - (2p - x) through atom pairs (p, q) subject to
//      the same-direction constraint: the first hop and the second hop move
//      the same way (x < p and 2p - x < q, or x > p and 2p - x > q).
struct ReflectionSets {
  std::vector<Rat> b;
  std::vector<Rat> b2;
};
ReflectionSets reflection_sets(const Rat& x, const VoterModel& vm);

// Least i with x in bit(i), i.e. x = k / 2^i; nullopt if x is not dyadic.
std::optional<int> bit_level(const Rat& x);

enum class Direction { Left, Right };

// Nearest bit(i) point strictly beyond x in the given direction, staying in
// [0, R]. Throws InstanceError when no such point exists in range.
Rat next_in_bit(const Rat& x, int i, Direction dir, const Rat& R);

// One actual movement of one candidate (no-op assignments are not recorded).
struct ShiftStep {
  enum class Kind { ShiftRight, ShiftLeft };
  Kind kind = Kind::ShiftRight;  // which phase issued the move
  int iteration = 0;   // level index i of the outer loop
  int candidate = 0;   // 0-based index (by position order at move time)
  Rat from;
  Rat to;
};

struct ShiftResult {
  Profile profile;
  std::vector<ShiftStep> trace;  // empty <=> input returned unchanged
};

// Canonicalize an equilibrium (Interval instance, integer atom positions).
// Throws InstanceError if the input is not an equilibrium, and
// std::logic_error("equilibrium broken at step t") if an intermediate
// re-verification ever fails (which would indicate a bug).
ShiftResult shift_to_low_bits(const Profile& S, const Instance& inst);

// Exact equilibrium over the dyadic grid bit(m) on [0, R] with continuum
// deviations; grid size R 2^m + 1 capped by HOTEQ_GRID_LIMIT (default 1e5).
// The dyadic-canonicalization theorem makes this complete: an equilibrium
// exists on the continuum iff one exists on this grid.
std::optional<Profile> solve_grid(const Instance& inst);

// Hard family: n = 4k+2 unit atoms at 1..n, m = 3k+2 candidates on [0, n+1];
// the equilibrium pins candidate pairs just left of the even anchors with
// offsets 2^-(k-l+1) and is rigid (lower_bit_check holds).
struct HardInstance {
  Instance instance;
  Profile profile;
};
HardInstance gen_hard(int k);

}  // namespace hoteq
