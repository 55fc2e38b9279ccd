#pragma once
// Equilibrium search over a finite set of candidate positions by a
// left-to-right table recursion. A table entry
//     (i, left, mid, right, minu, maxd)
// asks: placing candidate i at `mid` with occupied neighbours `left` and
// `right`, can positions i+1..m be completed so that
//   (a) every candidate j >= i is a best response in its own merged gap
//       (within the mode's ε),
//   (b) every utility from candidate i on is at least `minu`, and
//   (c) every entrant gap value from gap (left, mid) on is at most `maxd`?
// The entry domain requires minu >= maxd (- ε). Feasibility is antitone in
// minu and monotone in maxd, so successor thresholds can stay fixed along a
// witness chain (the threshold reformulation); the root scan is pinned to
// lexicographic order (s1, s2 ascending; minu descending; maxd ascending)
// over the utility value set, which makes the returned profile deterministic.

#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "hoteq/deviation.hpp"
#include "hoteq/model.hpp"
#include "hoteq/utility.hpp"

namespace hoteq {

enum class DpMode { Exact, Eps };

struct DpOptions {
  DpMode mode = DpMode::Exact;
  Rat eps = 0;  // used when mode == Eps
};

// Entrant gap values intu(p, q): the best value a new candidate can get
// strictly inside the open gap (p, q).
class DeviationEvaluator {
 public:
  virtual ~DeviationEvaluator() = default;
  virtual Rat intu(const XPos& p, const XPos& q) = 0;
};

// Entrants restricted to the finite position set (max over grid points
// strictly inside the gap; empty set -> 0).
class FiniteSetEvaluator : public DeviationEvaluator {
 public:
  FiniteSetEvaluator(std::vector<Rat> points, const VoterModel& vm);
  Rat intu(const XPos& p, const XPos& q) override;
  // Entrant value of grid point z against neighbours (p, q).
  Rat value_at(const Rat& z, const XPos& p, const XPos& q) const;

 private:
  std::vector<Rat> points_;
  const VoterModel& vm_;
  std::map<std::pair<XPos, XPos>, Rat> cache_;
};

// Entrants anywhere in the open gap (continuum deviations).
class ContinuousEvaluator : public DeviationEvaluator {
 public:
  explicit ContinuousEvaluator(const VoterModel& vm);
  Rat intu(const XPos& p, const XPos& q) override;

 private:
  const VoterModel& vm_;
  std::map<std::pair<XPos, XPos>, Rat> cache_;
};

// Achievable utility / gap-value levels for the threshold scan. Atoms-only
// models use window masses over atom pairs with half-atom corrections
// (provably a superset of every achievable level); anything else falls back
// to window values over ordered position triples with sentinels.
std::vector<Rat> utility_value_set(const std::vector<Rat>& points, const VoterModel& vm);

struct DPKey {
  int i = 0;       // 1-based candidate index
  XPos left;       // occupied neighbour to the left (-inf iff i == 1)
  Rat mid;         // candidate i's position
  XPos right;      // occupied neighbour to the right (+inf iff i == m)
  Rat minu;        // utility floor for candidates i..m
  Rat maxd;        // gap-value ceiling from gap (left, mid) on

  friend bool operator<(const DPKey& a, const DPKey& b);
};

// Memoized table. Witness chains use the fixed thresholds of their root.
class DPTable {
 public:
  DPTable(std::vector<Rat> points, const VoterModel& vm, int m,
          const DpOptions& opts, DeviationEvaluator& eval);

  bool entry_feasible(const DPKey& key);

  // The stored successor position for a feasible non-base entry
  // (+inf when i == m-1: the successor's right neighbour is the sentinel).
  XPos witness_next(const DPKey& key);

  const std::vector<Rat>& points() const { return points_; }

 private:
  struct Entry {
    bool feasible = false;
    XPos next = XPos::pos_inf();
  };
  bool structurally_feasible(int i, const XPos& left, const Rat& mid, const XPos& right);

  std::vector<Rat> points_;
  const VoterModel& vm_;
  int m_;
  DpOptions opts_;
  DeviationEvaluator& eval_;
  std::map<DPKey, Entry> memo_;
  std::map<std::tuple<int, XPos, Rat, XPos>, bool> struct_memo_;

  friend class DpEngineA;
};

// Deterministic solver over the finite position set. Uses the faithful
// table scan for small sets and an equivalent Pareto-frontier formulation
// for large ones (> 32 points); both produce identical profiles, which the
// tests assert. The returned profile is re-verified against the evaluator's
// own deviation semantics before being handed out.
std::optional<Profile> dp_solve(const std::vector<Rat>& points, const VoterModel& vm,
                                int m, const DpOptions& opts, DeviationEvaluator& eval);

// Convenience: finite-space instance, evaluator chosen by the instance
// (finite space -> FiniteSetEvaluator over its positions).
std::optional<Profile> dp_solve(const Instance& inst, const DpOptions& opts);

namespace detail {
// Test hook: force a specific engine ('a' table scan, 'b' frontier, 0 auto).
std::optional<Profile> dp_solve_forced(const std::vector<Rat>& points,
                                       const VoterModel& vm, int m,
                                       const DpOptions& opts, DeviationEvaluator& eval,
                                       char engine);
}  // namespace detail

}  // namespace hoteq
