// Gap supremum engine. On the open gap (p, q) the entrant value is, region by
// region, (a constant from fully-won atoms) + (a quadratic from the density):
// region boundaries are the reflections 2w-p / 2w-q of atom positions w and
// density breakpoints x through the gap ends. Atom ownership is constant on
// each open region because every ownership flip happens exactly at such a
// reflection; the density contribution Fd(mu(z,q)) - Fd(mu(p,z)) stays within
// fixed density pieces on each open region for the same reason. Region maxima
// therefore sit at region endpoints or at the quadratic's vertex — all exact
// rationals.

#include "hoteq/deviation.hpp"

#include <algorithm>
#include <cassert>

#include "hoteq/measure.hpp"
#include "hoteq/utility.hpp"

namespace hoteq {

Rat entrant_value_at(const VoterModel& vm, const XPos& p, const XPos& q, const Rat& z) {
  // Window value with boundary halving; at p or q (density models) this is
  // the continuous limit value.
  return split_cdf(vm, mu_x(XPos(z), q)) - split_cdf(vm, mu_x(p, XPos(z)));
}

namespace {

struct Quad {
  Rat a, b, c;  // a z^2 + b z + c
  Rat eval(const Rat& z) const { return (a * z + b) * z + c; }
};

// Fd(mu(z, e)) as a quadratic in z on the open region containing `rep`,
// where e is the finite other window end. Valid across the whole region
// because mu(z, e) cannot cross a density breakpoint inside it.
Quad density_side_quad(const VoterModel& vm, const Rat& e, const Rat& rep) {
  Rat mu_rep = (rep + e) / 2;
  const auto& d = vm.density;
  if (d.size() < 2 || mu_rep <= d.front().x) {
    // At or below the support start: constant 0 (breakpoint crossings are
    // region boundaries, so "<= front" pins the whole region's side).
    if (d.size() >= 2 && mu_rep == d.front().x) {
      // mu sits exactly on the support start only at a region boundary rep;
      // interior reps never land here. Treat as constant 0.
    }
    return {Rat(0), Rat(0), Rat(0)};
  }
  if (mu_rep >= d.back().x) return {Rat(0), Rat(0), density_total(vm)};
  // Interior: one density piece covers the region's image.
  int j = 0;
  {
    int lo = 0, hi = static_cast<int>(d.size()) - 2;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (d[mid].x <= mu_rep)
        lo = mid;
      else
        hi = mid - 1;
    }
    j = lo;
  }
  Rat w = d[j + 1].x - d[j].x;
  Rat slope = (d[j + 1].f - d[j].f) / w;
  Rat base = density_cdf(vm, d[j].x);
  // u(z) = mu(z,e) - x_j = z/2 + (e/2 - x_j); Fd = base + f_j u + slope/2 u^2.
  Rat alpha(1, 2);
  Rat beta = e / 2 - d[j].x;
  Quad out;
  out.a = slope / 2 * alpha * alpha;
  out.b = alpha * (d[j].f + slope * beta);
  out.c = base + d[j].f * beta + slope / 2 * beta * beta;
  return out;
}

struct Region {
  XPos lo, hi;
  Rat rep;        // a point strictly inside
  Rat atom_const; // mass of atoms fully won anywhere in the region
  Quad quad;      // density contribution as a function of z
  Rat value_at(const Rat& z) const { return atom_const + quad.eval(z); }
};

}  // namespace

DeviationReport gap_sup(const VoterModel& vm, const XPos& p, const XPos& q) {
  DeviationReport rep_out;
  rep_out.sup = 0;
  if (!(p < q)) return rep_out;  // empty gap

  const bool pure_atoms = vm.atoms_only();

  // Interior breakpoints: reflections of every mass feature through both ends.
  std::vector<Rat> breaks;
  auto add_reflections = [&](const Rat& feature) {
    if (p.is_finite()) {
      Rat r = 2 * feature - p.value();
      if (XPos(r) > p && XPos(r) < q) breaks.push_back(r);
    }
    if (q.is_finite()) {
      Rat r = 2 * feature - q.value();
      if (XPos(r) > p && XPos(r) < q) breaks.push_back(r);
    }
  };
  for (const Atom& a : vm.atoms) add_reflections(a.pos);
  for (const DensityPoint& dpt : vm.density) add_reflections(dpt.x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Region bounds: p, breaks..., q.
  std::vector<XPos> bounds;
  bounds.push_back(p);
  for (const Rat& b : breaks) bounds.push_back(XPos(b));
  bounds.push_back(q);

  auto region_rep = [&](const XPos& lo, const XPos& hi) -> Rat {
    if (lo.is_finite() && hi.is_finite()) return (lo.value() + hi.value()) / 2;
    if (lo.is_finite()) return lo.value() + 1;
    if (hi.is_finite()) return hi.value() - 1;
    return 0;
  };

  // Distance from atom w to the nearest finite gap end (nullopt = unbounded).
  auto atom_guard = [&](const Rat& w) -> std::optional<Rat> {
    std::optional<Rat> d;
    if (p.is_finite()) d = abs(w - p.value());
    if (q.is_finite()) {
      Rat dq = abs(w - q.value());
      if (!d || dq < *d) d = dq;
    }
    return d;
  };

  std::vector<Region> regions;
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    Region r;
    r.lo = bounds[i];
    r.hi = bounds[i + 1];
    r.rep = region_rep(r.lo, r.hi);
    r.atom_const = 0;
    for (const Atom& a : vm.atoms) {
      auto d = atom_guard(a.pos);
      if (!d || abs(a.pos - r.rep) < *d) r.atom_const += a.weight;
    }
    if (vm.has_density()) {
      Quad right = q.is_finite() ? density_side_quad(vm, q.value(), r.rep)
                                 : Quad{Rat(0), Rat(0), density_total(vm)};
      Quad left = p.is_finite() ? density_side_quad(vm, p.value(), r.rep)
                                : Quad{Rat(0), Rat(0), Rat(0)};
      r.quad = {right.a - left.a, right.b - left.b, right.c - left.c};
    } else {
      r.quad = {Rat(0), Rat(0), Rat(0)};
    }
    regions.push_back(std::move(r));
  }

  // Supremum and leftmost attaining point: scan regions left to right; within
  // a region examine (left end, vertex, right end) in ascending z so ties
  // keep the smaller z. Unbounded regions are constant (every mass feature's
  // reflection lies at a breakpoint), so their rep covers them.
  bool have_best = false;
  Rat best_val = 0, best_z = 0;
  auto consider = [&](const Rat& val, const Rat& z) {
    if (!have_best || val > best_val) {
      have_best = true;
      best_val = val;
      best_z = z;
    }
  };
  for (const Region& r : regions) {
    std::vector<Rat> zs;
    if (r.lo.is_finite()) zs.push_back(r.lo.value());
    if (r.quad.a < 0) {
      Rat vz = -r.quad.b / (2 * r.quad.a);
      if (XPos(vz) > r.lo && XPos(vz) < r.hi) zs.push_back(vz);
    }
    if (r.hi.is_finite()) zs.push_back(r.hi.value());
    if (zs.empty()) zs.push_back(r.rep);
    for (const Rat& z : zs) consider(r.value_at(z), z);
  }
  assert(have_best);
  rep_out.sup = best_val < 0 ? Rat(0) : best_val;  // values are never negative
  rep_out.best_point = best_z;

  if (pure_atoms) {
    // Piece decomposition: merge neighbouring constant regions when both
    // values AND the boundary's tie-split value coincide.
    std::vector<Piece> pieces;
    for (size_t i = 0; i < regions.size(); ++i) {
      const Region& r = regions[i];
      Rat v = r.atom_const;
      if (!pieces.empty() && pieces.back().value == v &&
          pieces.back().hi.is_finite() &&
          entrant_value_at(vm, p, q, pieces.back().hi.value()) == v) {
        pieces.back().hi = r.hi;
      } else {
        pieces.push_back({r.lo, r.hi, v});
      }
    }
    rep_out.pieces = std::move(pieces);
    for (const Piece& pc : rep_out.pieces) {
      if (pc.value == rep_out.sup) {
        rep_out.best_piece = pc;
        break;
      }
    }
    rep_out.best_point.reset();  // atoms report pieces, not points
  }
  return rep_out;
}

DeviationReport gap_sup_atomic(const VoterModel& vm, const XPos& p, const XPos& q) {
  if (!vm.atoms_only())
    throw std::invalid_argument("gap_sup_atomic: voter model must be atoms-only");
  return gap_sup(vm, p, q);
}

DeviationReport gap_sup_density(const VoterModel& vm, const Rat& p, const Rat& q) {
  if (!vm.density_only())
    throw std::invalid_argument("gap_sup_density: voter model must be density-only");
  return gap_sup(vm, XPos(p), XPos(q));
}

}  // namespace hoteq
