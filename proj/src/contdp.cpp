#include "hoteq/contdp.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "hoteq/dp.hpp"
#include "hoteq/measure.hpp"
#include "hoteq/rational.hpp"
#include "hoteq/utility.hpp"

namespace hoteq {

namespace {

std::size_t effective_limit(std::size_t limit) {
  if (limit > 0) return limit;
  if (const char* s = std::getenv("HOTEQ_GRID_LIMIT")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

void require_density(const Instance& inst, const char* what) {
  if (!inst.voters.density_only())
    throw InstanceError(std::string(what) + " requires a pure density voter model");
}

// Number of grid steps ceil(R / (eps / 4M)); lets the halving search test
// whether a pitch still fits the point budget before building anything.
Int grid_steps(const Instance& inst, const Rat& eps) {
  if (!inst.density_bound)
    throw InstanceError("density bound M required for grid discretization");
  const Rat& M = *inst.density_bound;
  if (M <= 0) throw InstanceError("density bound M must be positive");
  const Rat R = interval_space(inst).R;
  Rat alpha = eps / (4 * M);
  return ceil_int(R / alpha);
}

}  // namespace

AlphaGrid alpha_grid(const Instance& inst, const Rat& eps, std::size_t limit) {
  require_density(inst, "grid discretization");
  if (eps <= 0) throw InstanceError("epsilon must be positive");
  const Rat R = interval_space(inst).R;
  Int steps = grid_steps(inst, eps);
  Int cap(static_cast<unsigned long>(effective_limit(limit)));
  if (steps + 1 > cap) throw InstanceError("grid limit exceeded");

  AlphaGrid g;
  g.alpha = R / Rat(steps);
  long n = steps.get_si();
  g.points.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) g.points.push_back(Rat(k) * g.alpha);
  return g;
}

Profile quantile_profile(const Instance& inst) {
  require_density(inst, "quantile profile");
  const Rat R = interval_space(inst).R;
  const Rat W = total_mass(inst.voters);
  const int m = inst.m;

  Profile S;
  S.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    Rat target = Rat(i) * W / Rat(m + 1);
    CutResult c = cut(inst, Rat(0), target);
    Rat q = c.lo;
    if (!S.empty() && q <= S.back()) {
      // Only reachable when two irrational quantiles share a dyadic bracket;
      // nudge within the bracket width to restore strict increase.
      if (S.back() >= R)
        throw std::logic_error("quantile collision at the right end of [0, R]");
      q = S.back() + (R - S.back()) / Rat(Int(1) << 61);
    }
    S.push_back(q);
  }
  return S;
}

ApproxResult solve_cc(const Instance& inst, const std::optional<Rat>& eps) {
  require_density(inst, "approximate solving");
  const Rat W = total_mass(inst.voters);
  const int m = inst.m;

  auto quantile_result = [&]() {
    ApproxResult r;
    r.kind = ApproxResult::Kind::QuantileFallback;
    r.profile = quantile_profile(inst);
    r.guarantee = W / Rat(m + 1);
    return r;
  };
  auto grid_attempt = [&](const Rat& e) -> std::optional<Profile> {
    AlphaGrid g = alpha_grid(inst, e);
    FiniteSetEvaluator eval(g.points, inst.voters);
    DpOptions opts{DpMode::Eps, 2 * e};
    return dp_solve(g.points, inst.voters, m, opts, eval);
  };

  if (eps) {
    if (*eps <= 0) throw InstanceError("epsilon must be positive");
    if (*eps >= W / Rat(4 * m)) return quantile_result();
    std::optional<Profile> S = grid_attempt(*eps);
    if (S) {
      ApproxResult r;
      r.kind = ApproxResult::Kind::GridDP;
      r.profile = std::move(*S);
      r.guarantee = 4 * *eps;
      return r;
    }
    ApproxResult r = quantile_result();
    r.certifies_no_eps_equilibrium = true;
    r.refuted_eps = *eps;
    return r;
  }

  // Epsilon-free mode: halve from W/(8m) while the grid search succeeds;
  // stop at the floor (default W * 2^-20, HOTEQ_EPS_FLOOR overrides) or when
  // the grid would outgrow the point budget.
  Rat floor_eps = W / Rat(Int(1) << 20);
  if (const char* s = std::getenv("HOTEQ_EPS_FLOOR"))
    floor_eps = rat_from_string(s, "HOTEQ_EPS_FLOOR");
  const Int cap(static_cast<unsigned long>(effective_limit(0)));

  Rat e = W / Rat(8 * m);
  std::optional<Profile> last;
  Rat last_e;
  std::optional<Rat> fail_e;
  while (true) {
    if (grid_steps(inst, e) + 1 > cap) break;
    std::optional<Profile> S = grid_attempt(e);
    if (!S) {
      fail_e = e;
      break;
    }
    last = std::move(S);
    last_e = e;
    if (e / 2 < floor_eps) break;
    e = e / 2;
  }

  if (!last) {
    ApproxResult r = quantile_result();
    if (fail_e) {
      r.certifies_no_eps_equilibrium = true;
      r.refuted_eps = fail_e;
    }
    return r;
  }
  ApproxResult r;
  r.kind = ApproxResult::Kind::BinarySearchBracket;
  r.profile = std::move(*last);
  r.guarantee = 4 * last_e;
  r.eps_high = last_e;
  r.eps_low = fail_e;  // absent when stopped by the floor or the point budget
  return r;
}

ElReport el_conditions(const Profile& S, const Instance& inst, const Rat& delta) {
  if (inst.voters.has_atoms())
    throw InstanceError("paired-equilibrium conditions require a pure density model");
  if (delta <= 0) throw InstanceError("pair distance must be positive");
  validate_profile(S, inst);
  const Rat R = interval_space(inst).R;
  const VoterModel& vm = inst.voters;
  const int m = static_cast<int>(S.size());

  ElReport rep;

  // (1) every total utility >= every one-sided vote mass.
  Rat min_total, max_side;
  for (int i = 0; i < m; ++i) {
    UtilParts u = util(vm, S, i);
    Rat side = std::max(u.left, u.right);
    if (i == 0) {
      min_total = u.total;
      max_side = side;
    } else {
      min_total = std::min(min_total, u.total);
      max_side = std::max(max_side, side);
    }
  }
  rep.c1 = min_total >= max_side;

  auto paired_with_next = [&](int i) {  // candidates i, i+1 (0-based)
    return i >= 0 && i + 1 < m && S[i + 1] - S[i] == delta;
  };

  // (2) both outermost candidates belong to a pair.
  rep.c2 = m >= 2 && paired_with_next(0) && paired_with_next(m - 2);

  // (3) unpaired interior candidates: equal density at the two window midpoints.
  rep.c3 = true;
  for (int i = 1; i + 1 < m; ++i) {
    if (paired_with_next(i - 1) || paired_with_next(i)) continue;
    if (density_value(vm, mu(S[i - 1], S[i])) != density_value(vm, mu(S[i], S[i + 1])))
      rep.c3 = false;
  }

  // (4) each pair's inner-midpoint density dominates the outer window edges
  // (sentinel edges clamp to 0 and R).
  rep.c4 = true;
  for (int i = 0; i + 1 < m; ++i) {
    if (!paired_with_next(i)) continue;
    Rat inner = density_value(vm, mu(S[i], S[i + 1]));
    Rat left_arg = i == 0 ? Rat(0) : std::max(mu(S[i - 1], S[i]), Rat(0));
    Rat right_arg = i + 2 >= m ? R : std::min(mu(S[i + 1], S[i + 2]), R);
    if (inner < density_value(vm, left_arg) || inner < density_value(vm, right_arg))
      rep.c4 = false;
  }
  return rep;
}

}  // namespace hoteq
