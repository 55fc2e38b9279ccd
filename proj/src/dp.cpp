#include "hoteq/dp.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <tuple>

#include "hoteq/measure.hpp"

namespace hoteq {

namespace {

// Effective slack: Exact behaves as Eps(0) everywhere.
Rat eff_eps(const DpOptions& o) { return o.mode == DpMode::Eps ? o.eps : Rat(0); }

}  // namespace

// ---------------------------------------------------------------------------
// Evaluators

FiniteSetEvaluator::FiniteSetEvaluator(std::vector<Rat> points, const VoterModel& vm)
    : points_(std::move(points)), vm_(vm) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

Rat FiniteSetEvaluator::value_at(const Rat& z, const XPos& p, const XPos& q) const {
  return entrant_value_at(vm_, p, q, z);
}

Rat FiniteSetEvaluator::intu(const XPos& p, const XPos& q) {
  auto key = std::make_pair(p, q);
  auto hit = cache_.find(key);
  if (hit != cache_.end()) return hit->second;

  Rat best = 0;
  if (p.is_neg_inf() && q.is_pos_inf()) {
    // Any entrant alone captures everything.
    best = points_.empty() ? Rat(0) : total_mass(vm_);
  } else if (p.is_neg_inf()) {
    // Value h(mu(z, q)) is nondecreasing in z: the largest point wins.
    auto it = std::lower_bound(points_.begin(), points_.end(), q.value());
    if (it != points_.begin()) best = value_at(*std::prev(it), p, q);
  } else if (q.is_pos_inf()) {
    // Value W - h(mu(p, z)) is nonincreasing in z: the smallest point wins.
    auto it = std::upper_bound(points_.begin(), points_.end(), p.value());
    if (it != points_.end()) best = value_at(*it, p, q);
  } else {
    auto lo = std::upper_bound(points_.begin(), points_.end(), p.value());
    auto hi = std::lower_bound(points_.begin(), points_.end(), q.value());
    for (auto it = lo; it != hi; ++it) best = std::max(best, value_at(*it, p, q));
  }
  cache_.emplace(key, best);
  return best;
}

ContinuousEvaluator::ContinuousEvaluator(const VoterModel& vm) : vm_(vm) {}

Rat ContinuousEvaluator::intu(const XPos& p, const XPos& q) {
  auto key = std::make_pair(p, q);
  auto hit = cache_.find(key);
  if (hit != cache_.end()) return hit->second;
  Rat v = gap_sup(vm_, p, q).sup;
  cache_.emplace(key, v);
  return v;
}

// ---------------------------------------------------------------------------
// Utility value set

std::vector<Rat> utility_value_set(const std::vector<Rat>& points, const VoterModel& vm) {
  std::vector<Rat> vals;
  vals.push_back(0);
  vals.push_back(total_mass(vm));
  if (vm.atoms_only()) {
    // Window masses over atom pairs with end half-atom corrections: every
    // captured window equals a closed atom range minus halves of the atoms
    // sitting exactly on the window boundary.
    const auto& at = vm.atoms;
    for (std::size_t i = 0; i < at.size(); ++i) {
      for (std::size_t j = i; j < at.size(); ++j) {
        Rat full = 0;
        for (std::size_t t = i; t <= j; ++t) full += at[t].weight;
        vals.push_back(full);
        vals.push_back(full - at[i].weight / 2);
        vals.push_back(full - at[j].weight / 2);
        vals.push_back(full - at[i].weight / 2 - at[j].weight / 2);
      }
    }
  } else {
    // Window values over ordered occupant triples with sentinels: a strict
    // superset of every achievable utility on the point set.
    const std::size_t n = points.size();
    for (std::size_t mi = 0; mi < n; ++mi) {
      for (std::size_t a = 0; a <= mi; ++a) {
        XPos left = a == mi ? XPos::neg_inf() : XPos(points[a]);
        for (std::size_t b = mi; b < n + 1; ++b) {
          XPos right = b == n ? XPos::pos_inf() : XPos(points[b]);
          if (b != n && points[b] <= points[mi]) continue;
          vals.push_back(util_window(vm, left, points[mi], right).total);
        }
      }
    }
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

// ---------------------------------------------------------------------------
// Table recursion (engine A)

bool operator<(const DPKey& a, const DPKey& b) {
  return std::tie(a.i, a.left, a.mid, a.right, a.minu, a.maxd) <
         std::tie(b.i, b.left, b.mid, b.right, b.minu, b.maxd);
}

DPTable::DPTable(std::vector<Rat> points, const VoterModel& vm, int m,
                 const DpOptions& opts, DeviationEvaluator& eval)
    : points_(std::move(points)), vm_(vm), m_(m), opts_(opts), eval_(eval) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

// Threshold-free necessary condition: the best-response chain alone.
bool DPTable::structurally_feasible(int i, const XPos& left, const Rat& mid,
                                    const XPos& right) {
  auto key = std::make_tuple(i, left, mid, right);
  auto hit = struct_memo_.find(key);
  if (hit != struct_memo_.end()) return hit->second;
  struct_memo_.emplace(key, false);  // cycle-safe default; keys strictly advance

  bool ok = false;
  Rat u = util_window(vm_, left, mid, right).total;
  if (u >= eval_.intu(left, right) - eff_eps(opts_)) {
    if (i == m_) {
      ok = true;
    } else if (i == m_ - 1) {
      ok = structurally_feasible(m_, XPos(mid), right.value(), XPos::pos_inf());
    } else {
      auto it = std::upper_bound(points_.begin(), points_.end(), right.value());
      for (; it != points_.end(); ++it) {
        if (structurally_feasible(i + 1, XPos(mid), right.value(), XPos(*it))) {
          ok = true;
          break;
        }
      }
    }
  }
  struct_memo_[key] = ok;
  return ok;
}

bool DPTable::entry_feasible(const DPKey& key) {
  const Rat eps = eff_eps(opts_);
  // Domain: thresholds must be ordered (within the slack).
  if (key.minu < key.maxd - eps) return false;
  if (!(key.left < XPos(key.mid) && XPos(key.mid) < key.right)) return false;

  auto hit = memo_.find(key);
  if (hit != memo_.end()) return hit->second.feasible;

  Entry e;
  do {
    if (!structurally_feasible(key.i, key.left, key.mid, key.right)) break;
    Rat u = util_window(vm_, key.left, key.mid, key.right).total;
    if (u < key.minu) break;                                  // utility floor
    if (eval_.intu(key.left, XPos(key.mid)) > key.maxd) break;  // left gap cap
    if (eval_.intu(XPos(key.mid), key.right) > key.maxd) break;  // right gap cap
    if (key.i == m_) {
      e.feasible = true;
      break;
    }
    // Successor with the same thresholds (threshold monotonicity makes the
    // quantified minu'/maxd' form equivalent); first feasible next position
    // is the stored witness.
    if (key.i == m_ - 1) {
      DPKey succ{m_, XPos(key.mid), key.right.value(), XPos::pos_inf(), key.minu,
                 key.maxd};
      if (entry_feasible(succ)) {
        e.feasible = true;
        e.next = XPos::pos_inf();
      }
      break;
    }
    auto it = std::upper_bound(points_.begin(), points_.end(), key.right.value());
    for (; it != points_.end(); ++it) {
      DPKey succ{key.i + 1, XPos(key.mid), key.right.value(), XPos(*it), key.minu,
                 key.maxd};
      if (entry_feasible(succ)) {
        e.feasible = true;
        e.next = XPos(*it);
        break;
      }
    }
  } while (false);

  memo_[key] = e;
  return e.feasible;
}

XPos DPTable::witness_next(const DPKey& key) {
  auto hit = memo_.find(key);
  if (hit == memo_.end() || !hit->second.feasible || key.i >= m_)
    throw std::logic_error("witness_next: entry not feasible or base");
  return hit->second.next;
}

namespace {

// Re-check a finished profile against the evaluator's own deviation
// semantics (defense in depth; a failure is a solver bug, not user error).
void defense_check(const Profile& S, const VoterModel& vm, const DpOptions& opts,
                   DeviationEvaluator& eval) {
  const Rat eps = eff_eps(opts);
  const int m = static_cast<int>(S.size());
  Rat min_u;
  for (int i = 0; i < m; ++i) {
    XPos left = i > 0 ? XPos(S[i - 1]) : XPos::neg_inf();
    XPos right = i + 1 < m ? XPos(S[i + 1]) : XPos::pos_inf();
    Rat u = util_window(vm, left, S[i], right).total;
    if (u < eval.intu(left, right) - eps)
      throw std::logic_error("solver produced a non-equilibrium (merged gap)");
    min_u = i == 0 ? u : std::min(min_u, u);
  }
  for (int g = 0; g <= m; ++g) {
    XPos lo = g > 0 ? XPos(S[g - 1]) : XPos::neg_inf();
    XPos hi = g < m ? XPos(S[g]) : XPos::pos_inf();
    if (min_u < eval.intu(lo, hi) - eps)
      throw std::logic_error("solver produced a non-equilibrium (open gap)");
  }
}

std::optional<Profile> solve_engine_a(const std::vector<Rat>& pts, const VoterModel& vm,
                                      int m, const DpOptions& opts,
                                      DeviationEvaluator& eval) {
  DPTable table(pts, vm, m, opts, eval);
  const std::vector<Rat>& points = table.points();
  std::vector<Rat> values = utility_value_set(points, vm);
  const Rat eps = eff_eps(opts);

  auto scan_thresholds = [&](const XPos& left, const Rat& s1,
                             const XPos& right) -> std::optional<DPKey> {
    // Lexicographic: minu descending, then maxd ascending.
    for (auto mu_it = values.rbegin(); mu_it != values.rend(); ++mu_it) {
      for (const Rat& maxd : values) {
        if (maxd > *mu_it + eps) break;
        DPKey key{1, left, s1, right, *mu_it, maxd};
        if (table.entry_feasible(key)) return key;
      }
    }
    return std::nullopt;
  };

  if (m == 1) {
    for (const Rat& s1 : points) {
      auto root = scan_thresholds(XPos::neg_inf(), s1, XPos::pos_inf());
      if (root) return Profile{s1};
    }
    return std::nullopt;
  }

  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      auto root = scan_thresholds(XPos::neg_inf(), points[a], XPos(points[b]));
      if (!root) continue;
      Profile S{points[a], points[b]};
      DPKey key = *root;
      while (static_cast<int>(S.size()) < m) {
        XPos nxt = table.witness_next(key);
        S.push_back(nxt.value());
        key = DPKey{key.i + 1, XPos(key.mid), key.right.value(), nxt, key.minu,
                    key.maxd};
      }
      return S;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pareto-frontier suffix formulation (engine B) — same output, no V^2 scan.

// One nondominated way to finish candidates i..m given (s_{i-1}, s_i):
//   A = least utility among candidates i..m,
//   B = largest entrant gap value over gaps (s_{i-1}, s_i) .. (s_m, +inf),
// subject to every merged-gap best-response condition along the suffix.
struct FrontierPoint {
  Rat A;
  Rat B;
};

class EngineB {
 public:
  EngineB(const std::vector<Rat>& pts, const VoterModel& vm, int m,
          const DpOptions& opts, DeviationEvaluator& eval)
      : points_(pts), vm_(vm), m_(m), eps_(eff_eps(opts)), opts_(opts), eval_(eval) {}

  std::optional<Profile> solve() {
    if (m_ == 1) {
      for (const Rat& s1 : points_) {
        Rat u = total_mass(vm_);
        if (u < eval_.intu(XPos::neg_inf(), XPos::pos_inf()) - eps_) continue;
        Rat B = std::max(eval_.intu(XPos::neg_inf(), XPos(s1)),
                         eval_.intu(XPos(s1), XPos::pos_inf()));
        if (admissible_cap(B, u)) return Profile{s1};
      }
      return std::nullopt;
    }
    for (std::size_t a = 0; a < points_.size(); ++a) {
      const Rat& s1 = points_[a];
      Rat out_left = eval_.intu(XPos::neg_inf(), XPos(s1));
      for (std::size_t b = a + 1; b < points_.size(); ++b) {
        const Rat& s2 = points_[b];
        Rat u1 = util_window(vm_, XPos::neg_inf(), s1, XPos(s2)).total;
        if (u1 < eval_.intu(XPos::neg_inf(), XPos(s2)) - eps_) continue;
        const std::vector<FrontierPoint>& fr = frontier(2, XPos(s1), s2);
        // Best thresholds over this root: maximize A, then minimize B.
        std::optional<FrontierPoint> best;
        for (const FrontierPoint& fp : fr) {
          Rat A = std::min(fp.A, u1);
          Rat B = std::max(fp.B, out_left);
          if (!admissible_cap(B, A)) continue;
          if (!best || A > best->A || (A == best->A && B < best->B))
            best = FrontierPoint{A, B};
        }
        if (!best) continue;
        Rat minu = best->A;
        Rat maxd = cap_value(best->B);
        return reconstruct(s1, s2, minu, maxd);
      }
    }
    return std::nullopt;
  }

 private:
  // The threshold scan of the table formulation draws maxd from the utility
  // value set; the smallest admissible element at gap level B is B itself
  // whenever B is a grid window value (finite-set evaluators), else the next
  // value-set element upward (continuous evaluator over atoms).
  Rat cap_value(const Rat& B) {
    if (dynamic_cast<ContinuousEvaluator*>(&eval_) == nullptr) return B;
    ensure_value_set();
    auto it = std::lower_bound(values_.begin(), values_.end(), B);
    if (it == values_.end())
      throw std::logic_error("gap level above every achievable value");
    return *it;
  }
  bool admissible_cap(const Rat& B, const Rat& A) {
    if (dynamic_cast<ContinuousEvaluator*>(&eval_) == nullptr) return A >= B - eps_;
    ensure_value_set();
    auto it = std::lower_bound(values_.begin(), values_.end(), B);
    return it != values_.end() && *it <= A + eps_;
  }
  void ensure_value_set() {
    if (!values_.empty()) return;
    if (!vm_.atoms_only())
      throw std::logic_error(
          "continuous-deviation threshold search requires atomic voters");
    values_ = utility_value_set(points_, vm_);
  }

  const std::vector<FrontierPoint>& frontier(int i, const XPos& p, const Rat& q) {
    auto key = std::make_tuple(i, p, q);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;

    std::vector<FrontierPoint> raw;
    if (i == m_) {
      Rat u = util_window(vm_, p, q, XPos::pos_inf()).total;
      if (u >= eval_.intu(p, XPos::pos_inf()) - eps_) {
        Rat B = std::max(eval_.intu(p, XPos(q)), eval_.intu(XPos(q), XPos::pos_inf()));
        raw.push_back({u, B});
      }
    } else {
      Rat own_gap = eval_.intu(p, XPos(q));
      auto it = std::upper_bound(points_.begin(), points_.end(), q);
      for (; it != points_.end(); ++it) {
        const Rat& r = *it;
        Rat u = util_window(vm_, p, q, XPos(r)).total;
        if (u < eval_.intu(p, XPos(r)) - eps_) continue;
        for (const FrontierPoint& fp : frontier(i + 1, XPos(q), r)) {
          raw.push_back({std::min(fp.A, u), std::max(fp.B, own_gap)});
        }
      }
    }
    // Keep the nondominated set (max A, min B), sorted by A ascending:
    // sweep A from high to low, retaining a point iff its B strictly beats
    // every B already kept. Within equal A the sweep must meet min B first,
    // hence B descending in the ascending sort.
    std::sort(raw.begin(), raw.end(), [](const FrontierPoint& x, const FrontierPoint& y) {
      if (x.A != y.A) return x.A < y.A;
      return x.B > y.B;
    });
    std::vector<FrontierPoint> front;
    for (auto rit = raw.rbegin(); rit != raw.rend(); ++rit) {
      if (front.empty() || rit->B < front.back().B) front.push_back(*rit);
    }
    std::reverse(front.begin(), front.end());
    auto ins = memo_.emplace(key, std::move(front));
    return ins.first->second;
  }

  // Witness chain: at (i, p, q) pick the smallest next point r whose suffix
  // supports the fixed thresholds — identical to the stored-witness chain of
  // the table formulation.
  Profile reconstruct(const Rat& s1, const Rat& s2, const Rat& minu, const Rat& maxd) {
    Profile S{s1, s2};
    XPos p(s1);
    Rat q = s2;
    int i = 2;
    while (static_cast<int>(S.size()) < m_) {
      if (eval_.intu(p, XPos(q)) > maxd)
        throw std::logic_error("frontier reconstruction: gap cap violated");
      bool advanced = false;
      auto it = std::upper_bound(points_.begin(), points_.end(), q);
      for (; it != points_.end(); ++it) {
        const Rat& r = *it;
        Rat u = util_window(vm_, p, q, XPos(r)).total;
        if (u < minu) continue;
        if (u < eval_.intu(p, XPos(r)) - eps_) continue;
        bool suffix_ok = false;
        for (const FrontierPoint& fp : frontier(i + 1, XPos(q), r)) {
          if (fp.A >= minu && fp.B <= maxd) {
            suffix_ok = true;
            break;
          }
        }
        if (!suffix_ok) continue;
        S.push_back(r);
        p = XPos(q);
        q = r;
        ++i;
        advanced = true;
        break;
      }
      if (!advanced)
        throw std::logic_error("frontier reconstruction: no successor found");
    }
    // Final candidate's own checks against the sentinel.
    Rat u = util_window(vm_, p, q, XPos::pos_inf()).total;
    if (u < minu || u < eval_.intu(p, XPos::pos_inf()) - eps_)
      throw std::logic_error("frontier reconstruction: tail check failed");
    return S;
  }

  const std::vector<Rat>& points_;
  const VoterModel& vm_;
  int m_;
  Rat eps_;
  DpOptions opts_;
  DeviationEvaluator& eval_;
  std::map<std::tuple<int, XPos, Rat>, std::vector<FrontierPoint>> memo_;
  std::vector<Rat> values_;
};

std::optional<Profile> solve_engine_b(const std::vector<Rat>& pts, const VoterModel& vm,
                                      int m, const DpOptions& opts,
                                      DeviationEvaluator& eval) {
  EngineB eng(pts, vm, m, opts, eval);
  return eng.solve();
}

std::optional<Profile> dp_solve_impl(const std::vector<Rat>& points_in,
                                     const VoterModel& vm, int m, const DpOptions& opts,
                                     DeviationEvaluator& eval, char engine) {
  if (m < 1) throw InstanceError("need at least one candidate");
  std::vector<Rat> pts = points_in;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (static_cast<std::size_t>(m) > pts.size())
    throw InstanceError("more candidates than candidate positions");
  if (opts.mode == DpMode::Eps && opts.eps < 0)
    throw InstanceError("epsilon must be nonnegative");

  if (engine == 0) engine = pts.size() > 32 ? 'b' : 'a';
  std::optional<Profile> S = engine == 'b' ? solve_engine_b(pts, vm, m, opts, eval)
                                           : solve_engine_a(pts, vm, m, opts, eval);
  if (S) defense_check(*S, vm, opts, eval);
  return S;
}

}  // namespace

namespace detail {
std::optional<Profile> dp_solve_forced(const std::vector<Rat>& points,
                                       const VoterModel& vm, int m,
                                       const DpOptions& opts, DeviationEvaluator& eval,
                                       char engine) {
  return dp_solve_impl(points, vm, m, opts, eval, engine);
}
}  // namespace detail

std::optional<Profile> dp_solve(const std::vector<Rat>& points, const VoterModel& vm,
                                int m, const DpOptions& opts, DeviationEvaluator& eval) {
  return dp_solve_impl(points, vm, m, opts, eval, 0);
}

std::optional<Profile> dp_solve(const Instance& inst, const DpOptions& opts) {
  const FiniteSpace& sp = finite_space(inst);
  FiniteSetEvaluator eval(sp.positions, inst.voters);
  return dp_solve_impl(sp.positions, inst.voters, inst.m, opts, eval, 0);
}

}  // namespace hoteq
