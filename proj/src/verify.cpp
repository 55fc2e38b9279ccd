#include "hoteq/verify.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "hoteq/dp.hpp"
#include "hoteq/measure.hpp"
#include "hoteq/reflect.hpp"
#include "hoteq/utility.hpp"

namespace hoteq {

namespace {

// Neighbours of the slot vacated by candidate i, and of every surviving gap,
// as sentinel-aware bounds. S must be strictly increasing.
XPos left_of(const Profile& S, int idx) {
  return idx >= 1 ? XPos(S[idx - 1]) : XPos::neg_inf();
}
XPos right_of(const Profile& S, int idx) {
  return idx + 1 < static_cast<int>(S.size()) ? XPos(S[idx + 1]) : XPos::pos_inf();
}

// The profile with candidate i removed.
Profile erase_at(const Profile& S, int i) {
  Profile r;
  r.reserve(S.size() - 1);
  for (int j = 0; j < static_cast<int>(S.size()); ++j)
    if (j != i) r.push_back(S[j]);
  return r;
}

struct GapRef {
  XPos lo;
  XPos hi;
};

// The g-th gap (0-based, g = 0..|S|) of a sorted profile, sentinels outside.
GapRef gap_of(const Profile& S, int g) {
  GapRef r;
  r.lo = g >= 1 ? XPos(S[g - 1]) : XPos::neg_inf();
  r.hi = g < static_cast<int>(S.size()) ? XPos(S[g]) : XPos::pos_inf();
  return r;
}

// Entrant-value supremum of a gap under the instance's deviation semantics.
// Finite spaces maximize over unoccupied grid points; interval spaces take
// the continuous supremum. Returns the full report for witness extraction.
DeviationReport gap_report(const Instance& inst, const Profile& others, const GapRef& g) {
  if (is_finite_space(inst)) {
    DeviationReport rep;
    rep.sup = 0;
    for (const Rat& z : finite_space(inst).positions) {
      if (!(g.lo < XPos(z) && XPos(z) < g.hi)) continue;
      Rat v = entrant_value_at(inst.voters, g.lo, g.hi, z);
      if (!rep.best_point || v > rep.sup) {  // leftmost attaining point wins
        rep.sup = v;
        rep.best_point = z;
      }
    }
    (void)others;
    return rep;
  }
  return gap_sup(inst.voters, g.lo, g.hi);
}

// A concrete legal landing position inside gap (g.lo, g.hi) whose entrant
// value strictly exceeds `floor_value` and comes within a 1/1024 sliver of
// the gap's supremum, so the witness demonstrates (essentially all of) the
// claimed violation. Supremum-attaining points of density gaps can be limits
// at the gap boundary, so walk toward the attaining point until the value is
// close enough. `R` bounds the legal space.
struct Landing {
  Rat z;
  Rat value;
};
Landing concrete_landing(const VoterModel& vm, const GapRef& g, const Rat& R,
                         const DeviationReport& rep, const Rat& floor_value) {
  Rat lo = g.lo.is_neg_inf() ? Rat(0) : std::max(g.lo.value(), Rat(0));
  Rat hi = g.hi.is_pos_inf() ? R : std::min(g.hi.value(), R);
  const Rat margin = (rep.sup - floor_value) / 1024;
  auto legal = [&](const Rat& z) {
    return XPos(z) > g.lo && XPos(z) < g.hi && z >= 0 && z <= R;
  };
  auto good = [&](const Rat& v) { return v > floor_value && rep.sup - v <= margin; };
  std::vector<Rat> seeds;
  if (rep.best_piece) {
    const Piece& p = *rep.best_piece;
    Rat plo = p.lo.is_neg_inf() ? Rat(0) : std::max(p.lo.value(), Rat(0));
    Rat phi = p.hi.is_pos_inf() ? R : std::min(p.hi.value(), R);
    if (plo < phi) seeds.push_back((plo + phi) / 2);
  }
  if (rep.best_point) seeds.push_back(*rep.best_point);
  if (lo < hi) seeds.push_back((lo + hi) / 2);
  for (const Rat& s : seeds) {
    if (legal(s)) {
      Rat v = entrant_value_at(vm, g.lo, g.hi, s);
      if (good(v)) return {s, v};
    }
  }
  // Bisect toward the attaining point from both sides; the entrant value is
  // piecewise continuous and tends to the supremum along a one-sided walk.
  Rat target = rep.best_point ? *rep.best_point
                              : (rep.best_piece && rep.best_piece->lo.is_finite()
                                     ? rep.best_piece->lo.value()
                                     : (lo + hi) / 2);
  for (int side = 0; side < 2; ++side) {
    Rat start = side == 0 ? lo : hi;
    if (start == target) continue;
    Rat step = (target - start);
    for (int t = 1; t <= 200; ++t) {
      step /= 2;
      Rat z = target - step;
      if (!legal(z)) continue;
      Rat v = entrant_value_at(vm, g.lo, g.hi, z);
      if (good(v)) return {z, v};
    }
  }
  throw std::logic_error("verification witness: no concrete improving position found");
}

struct DirectScan {
  bool ok = true;
  std::optional<DeviationWitness> witness;
};

// The definition, literally: every candidate against every legal alternative
// position. Strict improvement beyond eps fails; the maximal-gain deviation
// (first candidate, then leftmost landing, on ties) becomes the witness.
DirectScan direct_scan(const Instance& inst, const Profile& S,
                       const std::vector<Rat>& utils, const Rat& eps) {
  const int m = static_cast<int>(S.size());
  DirectScan out;
  Rat best_gain = eps;  // violations must clear eps strictly
  int best_i = -1;
  GapRef best_gap;
  DeviationReport best_rep;
  for (int i = 0; i < m; ++i) {
    Profile others = erase_at(S, i);
    for (int g = 0; g <= static_cast<int>(others.size()); ++g) {
      GapRef gap = gap_of(others, g);
      DeviationReport rep = gap_report(inst, others, gap);
      Rat gain = rep.sup - utils[i];
      if (gain > best_gain) {
        best_gain = gain;
        best_i = i;
        best_gap = gap;
        best_rep = rep;
      }
    }
  }
  if (best_i < 0) return out;
  out.ok = false;
  DeviationWitness w;
  w.candidate = best_i;
  if (is_finite_space(inst)) {
    w.position = *best_rep.best_point;
    w.value = best_rep.sup;
  } else {
    Rat R = interval_space(inst).R;
    Landing land =
        concrete_landing(inst.voters, best_gap, R, best_rep, utils[best_i] + eps);
    w.position = land.z;
    w.value = land.value;
  }
  if (best_rep.best_piece) w.piece = best_rep.best_piece;
  w.gain = w.value - utils[best_i];
  out.witness = std::move(w);
  return out;
}

}  // namespace

VerificationReport is_eps_equilibrium(const Profile& S, const Instance& inst,
                                      const Rat& eps) {
  if (eps < 0) throw InstanceError("epsilon must be nonnegative");
  validate_profile(S, inst);
  const int m = static_cast<int>(S.size());

  VerificationReport rep;
  rep.utilities.reserve(m);
  for (int i = 0; i < m; ++i) rep.utilities.push_back(util(inst.voters, S, i).total);
  rep.min_utility = *std::min_element(rep.utilities.begin(), rep.utilities.end());

  // Condition route: each candidate best-responds within its merged gap, and
  // the minimum utility dominates every gap's entrant supremum (up to eps).
  bool cond_ok = true;
  for (int i = 0; i < m && cond_ok; ++i) {
    GapRef merged{left_of(S, i), right_of(S, i)};
    Profile others = erase_at(S, i);
    Rat intu = gap_report(inst, others, merged).sup;
    if (rep.utilities[i] < intu - eps) cond_ok = false;
  }
  rep.max_gap_value = 0;
  for (int g = 0; g <= m; ++g) {
    GapRef gap = gap_of(S, g);
    Rat v = gap_report(inst, S, gap).sup;
    if (g == 0 || v > rep.max_gap_value) rep.max_gap_value = v;
  }
  if (rep.min_utility < rep.max_gap_value - eps) cond_ok = false;

  // Direct route: the definition itself. Also produces the witness.
  DirectScan scan = direct_scan(inst, S, rep.utilities, eps);
  if (scan.ok != cond_ok)
    throw std::logic_error(
        "equilibrium verification routes disagree (condition vs direct)");

  rep.ok = cond_ok;
  if (!rep.ok) rep.witness = std::move(scan.witness);
  return rep;
}

VerificationReport is_equilibrium(const Profile& S, const Instance& inst) {
  return is_eps_equilibrium(S, inst, Rat(0));
}

std::vector<Profile> brute_force_solve(const Instance& inst,
                                       std::uint64_t enumeration_bound) {
  const FiniteSpace& sp = finite_space(inst);
  const int n = static_cast<int>(sp.positions.size());
  const int m = inst.m;
  if (m > n) throw InstanceError("more candidates than candidate positions");

  Int count = 1;
  for (int t = 0; t < m; ++t) count = count * (n - t) / (t + 1);
  if (count > Int(enumeration_bound))
    throw InstanceError("brute force enumeration bound exceeded");

  std::vector<Profile> found;
  std::vector<int> idx(m);
  for (int t = 0; t < m; ++t) idx[t] = t;
  while (true) {
    Profile S;
    S.reserve(m);
    for (int t = 0; t < m; ++t) S.push_back(sp.positions[idx[t]]);
    // Direct definition only: every candidate, every unoccupied grid point.
    std::vector<Rat> utils(m);
    for (int i = 0; i < m; ++i) utils[i] = util(inst.voters, S, i).total;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      Profile others = erase_at(S, i);
      for (const Rat& z : sp.positions) {
        if (std::binary_search(others.begin(), others.end(), z)) continue;
        if (z == S[i]) continue;
        if (utilout(inst.voters, others, z).total > utils[i]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) found.push_back(std::move(S));
    // next combination
    int t = m - 1;
    while (t >= 0 && idx[t] == n - m + t) --t;
    if (t < 0) break;
    ++idx[t];
    for (int u = t + 1; u < m; ++u) idx[u] = idx[u - 1] + 1;
  }
  return found;
}

bool lower_bit_check(const Profile& S, const Instance& inst) {
  const IntervalSpace& sp = interval_space(inst);
  validate_profile(S, inst);
  const int m = static_cast<int>(S.size());
  for (int i = 0; i < m; ++i) {
    std::optional<int> level = bit_level(S[i]);
    if (!level) throw InstanceError("lower_bit_check requires a dyadic profile");
    if (*level == 0) continue;
    // Every strictly-lower-level dyadic point lies on the grid of level L-1.
    int lvl = *level - 1;
    Int scale = Int(1) << lvl;
    // Range: strictly inside (s_{i-1}, s_{i+1}), within [0, R].
    Rat lo = i >= 1 ? S[i - 1] : Rat(0);
    bool lo_strict = i >= 1;
    Rat hi = i + 1 < m ? S[i + 1] : sp.R;
    bool hi_strict = i + 1 < m;
    Int k = ceil_int(lo * scale);
    if (lo_strict && Rat(k) == lo * scale) k += 1;
    Int k_end = floor_int(hi * scale);
    if (hi_strict && Rat(k_end) == hi * scale) k_end -= 1;
    for (; k <= k_end; k += 1) {
      Rat y = Rat(k) / Rat(scale);
      Profile moved = S;
      moved[i] = y;
      if (is_equilibrium(moved, inst).ok) return false;
    }
  }
  return true;
}

}  // namespace hoteq
