#pragma once
// Supremum of the entrant utility over an open gap (p, q) between two
// occupied positions (or sentinels): the best value a candidate can secure by
// landing strictly between p and q, in the limit sense — landing "arbitrarily
// close" to a boundary counts with its limit value, landing exactly on an
// occupied position does not.

#include <optional>
#include <vector>

#include "hoteq/model.hpp"
#include "hoteq/rational.hpp"

namespace hoteq {

// Maximal open subinterval of the gap on which the entrant value is the
// constant `value` (atoms-only models; for density models the value varies
// continuously and pieces are not reported).
struct Piece {
  XPos lo;
  XPos hi;
  Rat value;
};

struct DeviationReport {
  Rat sup;                         // supremum over the open gap; 0 if empty
  std::optional<Piece> best_piece; // atoms-only: leftmost piece attaining sup
  std::optional<Rat> best_point;   // density present: leftmost attaining z
                                   // (may equal a gap endpoint: limit point)
  std::vector<Piece> pieces;       // atoms-only: full decomposition, in order
};

// Atoms-only voter model.
DeviationReport gap_sup_atomic(const VoterModel& vm, const XPos& p, const XPos& q);

// Density-only voter model, finite gap ends.
DeviationReport gap_sup_density(const VoterModel& vm, const Rat& p, const Rat& q);

// Any voter model, sentinel-aware. This is the single underlying engine; the
// two named entry points above specialize it.
DeviationReport gap_sup(const VoterModel& vm, const XPos& p, const XPos& q);

// Entrant value at a specific z strictly inside (p, q): the window
// [mu(p, z), mu(z, q)] with boundary halving. Used by tests and witness
// replay to confirm reported piece values / attaining points.
Rat entrant_value_at(const VoterModel& vm, const XPos& p, const XPos& q, const Rat& z);

}  // namespace hoteq
