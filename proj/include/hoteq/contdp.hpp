#pragma once
// Approximate equilibria for continuous voter densities on [0, R]:
//   * quantile profile — candidate i at the i/(m+1) mass quantile; its best
//     unilateral improvement is bounded by W/(m+1);
//   * α-grid + table recursion — with a declared density bound M, snapping
//     candidates to a grid of pitch <= ε/(4M) and solving the 2ε-relaxed
//     table yields a 4ε-approximate equilibrium whenever one exists, and
//     certifies nonexistence of an ε-equilibrium otherwise;
//   * ε unspecified — halve ε from W/(8m) while the grid search succeeds and
//     report the final bracket.

#include <optional>
#include <vector>

#include "hoteq/model.hpp"

namespace hoteq {

// Candidate grid 0, α', 2α', ..., R with α' = R / ceil(R / α) <= α = ε/(4M):
// the raw pitch is shrunk just enough to tile [0, R] exactly, which only
// refines the grid and preserves every approximation guarantee.
struct AlphaGrid {
  Rat alpha;                // effective pitch α'
  std::vector<Rat> points;  // R/α' + 1 equally spaced positions
};

// Grid of pitch ε/(4M) (M = declared density bound, required); throws
// InstanceError if M is absent or the point count would exceed `limit`
// (0 = use HOTEQ_GRID_LIMIT / default 100000).
AlphaGrid alpha_grid(const Instance& inst, const Rat& eps, std::size_t limit = 0);

// Candidate i (1-based) at the smallest y with cdf(y) = i W/(m+1).
// Density-only instances; coordinates may carry tiny bracketing error when a
// cut has an irrational root (width <= 2^-60), see measure.hpp.
Profile quantile_profile(const Instance& inst);

struct ApproxResult {
  enum class Kind { QuantileFallback, GridDP, BinarySearchBracket };
  Kind kind = Kind::QuantileFallback;
  Profile profile;
  Rat guarantee;                       // QuantileFallback: W/(m+1); GridDP: 4ε
  std::optional<Rat> eps_low;          // BinarySearchBracket: last failing ε
  std::optional<Rat> eps_high;         //                      last succeeding ε
  bool certifies_no_eps_equilibrium = false;  // grid search refuted ε
  std::optional<Rat> refuted_eps;             // the refuted ε
};

// Density-only Interval instance. With ε given: grid route when ε < W/(4m)
// (falling back to the quantile profile and recording the refutation if the
// grid search fails), quantile route otherwise. Without ε: halving search.
ApproxResult solve_cc(const Instance& inst, const std::optional<Rat>& eps);

// The four structural conditions of a paired local equilibrium at pair
// distance δ: (1) every total utility at least every one-sided utility,
// (2) the outermost candidates are paired at distance δ, (3) unpaired
// interior candidates see equal densities at their two window midpoints,
// (4) for each pair, the density at the pair's inner midpoint is at least
// the density at both outer window edges (edges clamped to [0, R]).
struct ElReport {
  bool c1 = false, c2 = false, c3 = false, c4 = false;
  bool all() const { return c1 && c2 && c3 && c4; }
};

ElReport el_conditions(const Profile& S, const Instance& inst, const Rat& delta);

}  // namespace hoteq
