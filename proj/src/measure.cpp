// Exact mass arithmetic: cdf / split cdf / interval mass over atoms plus a
// piecewise-linear density, and the inverse-cdf cut.

#include "hoteq/measure.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace hoteq {

namespace {

// Index j such that the density piece [x_j, x_{j+1}] contains t, or -1 when t
// lies outside the support (density there is zero).
int piece_index(const VoterModel& vm, const Rat& t) {
  const auto& d = vm.density;
  if (d.size() < 2 || t < d.front().x || t > d.back().x) return -1;
  // Last breakpoint with x_j <= t, capped so j+1 stays valid.
  int lo = 0, hi = static_cast<int>(d.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (d[mid].x <= t)
      lo = mid;
    else
      hi = mid - 1;
  }
  return std::min(lo, static_cast<int>(d.size()) - 2);
}

// Exact integral of the density over [a, b] (a <= b assumed after clipping).
Rat density_mass(const VoterModel& vm, const Rat& a, const Rat& b) {
  const auto& d = vm.density;
  if (d.size() < 2) return 0;
  Rat lo = std::max(a, d.front().x);
  Rat hi = std::min(b, d.back().x);
  if (!(lo < hi)) return 0;
  Rat acc = 0;
  for (size_t j = 0; j + 1 < d.size(); ++j) {
    Rat pl = std::max(lo, d[j].x), ph = std::min(hi, d[j + 1].x);
    if (!(pl < ph)) continue;
    Rat w = d[j + 1].x - d[j].x;
    Rat slope = (d[j + 1].f - d[j].f) / w;
    Rat fpl = d[j].f + slope * (pl - d[j].x);
    Rat fph = d[j].f + slope * (ph - d[j].x);
    acc += (ph - pl) * (fpl + fph) / 2;  // exact trapezoid
  }
  return acc;
}

}  // namespace

Rat atom_mass_at(const VoterModel& vm, const Rat& x) {
  // Atoms are sorted by position.
  auto it = std::lower_bound(vm.atoms.begin(), vm.atoms.end(), x,
                             [](const Atom& a, const Rat& v) { return a.pos < v; });
  if (it != vm.atoms.end() && it->pos == x) return it->weight;
  return 0;
}

Rat total_mass(const VoterModel& vm) {
  Rat w = 0;
  for (const Atom& a : vm.atoms) w += a.weight;
  if (vm.has_density()) w += density_mass(vm, vm.density.front().x, vm.density.back().x);
  return w;
}

Rat cdf(const VoterModel& vm, const Rat& z) {
  Rat w = 0;
  for (const Atom& a : vm.atoms) {
    if (a.pos > z) break;
    w += a.weight;
  }
  if (vm.has_density() && z > vm.density.front().x)
    w += density_mass(vm, vm.density.front().x, z);
  return w;
}

Rat split_cdf(const VoterModel& vm, const XPos& x) {
  if (x.is_neg_inf()) return 0;
  if (x.is_pos_inf()) return total_mass(vm);
  return cdf(vm, x.value()) - atom_mass_at(vm, x.value()) / 2;
}

Rat mass(const VoterModel& vm, const XPos& a, const XPos& b) {
  if (b < a) return 0;
  Rat ub = b.is_pos_inf() ? total_mass(vm)
                          : (b.is_neg_inf() ? Rat(0) : cdf(vm, b.value()));
  Rat lb = 0;
  if (a.is_pos_inf()) lb = total_mass(vm);
  else if (a.is_finite()) lb = cdf(vm, a.value()) - atom_mass_at(vm, a.value());
  return ub - lb;
}

Rat density_value(const VoterModel& vm, const Rat& x) {
  int j = piece_index(vm, x);
  if (j < 0) return 0;
  const auto& d = vm.density;
  Rat w = d[j + 1].x - d[j].x;
  return d[j].f + (d[j + 1].f - d[j].f) / w * (x - d[j].x);
}

Rat density_cdf(const VoterModel& vm, const Rat& t) {
  if (!vm.has_density() || t <= vm.density.front().x) return 0;
  return density_mass(vm, vm.density.front().x, t);
}

Rat density_total(const VoterModel& vm) {
  if (!vm.has_density()) return 0;
  return density_mass(vm, vm.density.front().x, vm.density.back().x);
}

Rat support_end(const VoterModel& vm) {
  bool have = false;
  Rat e = 0;
  if (vm.has_atoms()) {
    e = vm.atoms.back().pos;
    have = true;
  }
  if (vm.has_density()) {
    if (!have || vm.density.back().x > e) e = vm.density.back().x;
    have = true;
  }
  if (!have) throw InstanceError("voters: empty model has no support");
  return e;
}

Rat support_begin(const VoterModel& vm) {
  bool have = false;
  Rat b = 0;
  if (vm.has_atoms()) {
    b = vm.atoms.front().pos;
    have = true;
  }
  if (vm.has_density()) {
    if (!have || vm.density.front().x < b) b = vm.density.front().x;
    have = true;
  }
  if (!have) throw InstanceError("voters: empty model has no support");
  return b;
}

namespace {

// Smallest t in (0, t_max] with (slope/2) t^2 + f0 t = rem, where f0 >= 0 is
// the density at the segment start and `rem` is realizable within the
// segment. Exact when the discriminant is a rational perfect square;
// otherwise a dyadic bracket of width <= 2^-60.
struct SegRoot {
  Rat lo, hi;
  bool exact;
};

bool perfect_square(const Rat& v, Rat& root) {
  if (v < 0) return false;
  const Int &n = v.get_num(), &d = v.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return false;
  Int rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rat(rn, rd);
  root.canonicalize();
  return true;
}

SegRoot solve_segment(const Rat& f0, const Rat& slope, const Rat& rem, const Rat& t_max) {
  assert(rem > 0);
  if (slope == 0) {
    // Pure linear stretch; f0 > 0 or the segment would carry no mass.
    return {rem / f0, rem / f0, true};
  }
  // Increasing-branch closed form t = 2 rem / (f0 + sqrt(f0^2 + 2 slope rem))
  // picks the smallest root automatically (double root at the flat point).
  Rat disc = f0 * f0 + 2 * slope * rem;
  Rat sq;
  if (perfect_square(disc, sq)) {
    Rat t = 2 * rem / (f0 + sq);
    return {t, t, true};
  }
  // Irrational root: dyadic bisection on g(t) = (slope/2) t^2 + f0 t - rem.
  Rat lo = 0, hi = t_max;
  auto g_nonneg = [&](const Rat& t) { return slope / 2 * t * t + f0 * t >= rem; };
  // Invariant: g(lo) < 0 <= g(hi).
  Rat width_target = Rat(Int(1), Int(1) << 60);
  while (hi - lo > width_target) {
    Rat mid = (lo + hi) / 2;
    if (g_nonneg(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi, false};
}

}  // namespace

CutResult cut(const VoterModel& vm, const Rat& z, const Rat& v) {
  if (v < 0) throw std::invalid_argument("cut: negative mass target");
  if (v == 0) return {z, z, true, true};

  // Event positions strictly right of z where the mass landscape changes.
  std::vector<Rat> events;
  for (const Atom& a : vm.atoms)
    if (a.pos > z) events.push_back(a.pos);
  for (const DensityPoint& p : vm.density)
    if (p.x > z) events.push_back(p.x);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  Rat rem = v;
  Rat cur = z;
  for (const Rat& e : events) {
    // Density mass on the open-ended stretch (cur, e).
    Rat dm = density_mass(vm, cur, e);
    if (rem <= dm) {
      // The target is met strictly inside (or exactly at the end of) the
      // density stretch. Identify the sub-piece and solve there.
      while (true) {
        int j = piece_index(vm, cur);
        Rat seg_hi = e;
        if (j >= 0) seg_hi = std::min(e, vm.density[j + 1].x);
        else {
          // Outside the support: no mass here; hop to the support start.
          Rat ds = vm.density.front().x;
          cur = std::min(e, std::max(cur, ds));
          j = piece_index(vm, cur);
          if (j < 0) break;  // stretch carries no density at all
          seg_hi = std::min(e, vm.density[j + 1].x);
        }
        Rat seg_mass = density_mass(vm, cur, seg_hi);
        if (rem > seg_mass) {
          rem -= seg_mass;
          cur = seg_hi;
          continue;
        }
        Rat f0 = density_value(vm, cur);
        Rat w = vm.density[j + 1].x - vm.density[j].x;
        Rat slope = (vm.density[j + 1].f - vm.density[j].f) / w;
        SegRoot r = solve_segment(f0, slope, rem, seg_hi - cur);
        return {cur + r.lo, cur + r.hi, r.exact, true};
      }
      // Fell through: dm was 0 yet rem <= dm means rem == 0 — handled above.
    }
    rem -= dm;
    cur = e;
    Rat aw = atom_mass_at(vm, e);
    if (aw > 0) {
      if (rem <= aw) {
        if (rem == aw) return {e, e, true, true};
        // The atom jump skips the target value: no y attains it.
        Rat end = support_end(vm);
        return {end, end, true, false};
      }
      rem -= aw;
    }
    if (rem == 0) return {e, e, true, true};
  }
  // Ran past the support with mass still owed.
  Rat end = support_end(vm);
  return {end, end, true, false};
}

CutResult cut(const Instance& inst, const Rat& z, const Rat& v) {
  const IntervalSpace& sp = interval_space(inst);
  if (z < 0 || z > sp.R) throw InstanceError("cut: z outside [0, R]");
  if (v < 0) throw InstanceError("cut: negative mass target");
  CutResult r = cut(inst.voters, z, v);
  if (!r.reached) {
    r.lo = sp.R;
    r.hi = sp.R;
    r.exact = true;
  }
  return r;
}

}  // namespace hoteq
