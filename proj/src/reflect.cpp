#include "hoteq/reflect.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hoteq/dp.hpp"
#include "hoteq/measure.hpp"

namespace hoteq {

Rat reflect(const Rat& x, const Rat& p) { return 2 * p - x; }

ReflectionSets reflection_sets(const Rat& x, const VoterModel& vm) {
  if (!vm.atoms_only())
    throw InstanceError("reflection sets require an atoms-only voter model");
  ReflectionSets rs;
  rs.b.reserve(vm.atoms.size());
  for (const Atom& a : vm.atoms) rs.b.push_back(reflect(x, a.pos));
  for (const Atom& a : vm.atoms) {
    Rat f1 = reflect(x, a.pos);
    for (const Atom& b : vm.atoms) {
      // Keep only double reflections that continue in the direction of the
      // first hop.
      if ((x < a.pos && f1 < b.pos) || (x > a.pos && f1 > b.pos))
        rs.b2.push_back(reflect(f1, b.pos));
    }
  }
  std::sort(rs.b.begin(), rs.b.end());
  rs.b.erase(std::unique(rs.b.begin(), rs.b.end()), rs.b.end());
  std::sort(rs.b2.begin(), rs.b2.end());
  rs.b2.erase(std::unique(rs.b2.begin(), rs.b2.end()), rs.b2.end());
  return rs;
}

std::optional<int> bit_level(const Rat& x) { return dyadic_level(x); }

Rat next_in_bit(const Rat& x, int i, Direction dir, const Rat& R) {
  if (i < 0) throw InstanceError("bit level must be nonnegative");
  Int scale = Int(1) << i;
  if (dir == Direction::Right) {
    Int k = floor_int(x * Rat(scale)) + 1;
    Rat y = Rat(k) / Rat(scale);
    if (y > R) throw InstanceError("no dyadic neighbor to the right within [0, R]");
    return y;
  }
  Int k = ceil_int(x * Rat(scale)) - 1;
  Rat y = Rat(k) / Rat(scale);
  if (y < 0) throw InstanceError("no dyadic neighbor to the left within [0, R]");
  return y;
}

namespace {

std::size_t grid_limit() {
  if (const char* s = std::getenv("HOTEQ_GRID_LIMIT")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

// Mutable profile with per-move re-verification and trace recording.
struct Shifter {
  Profile S;
  const Instance& inst;
  const Rat R;
  std::vector<ShiftStep> trace;

  // Assign candidate idx0 (0-based) to `to`; no-op assignments leave no
  // trace. Every actual movement must keep the profile an equilibrium.
  void apply(ShiftStep::Kind kind, int iteration, int idx0, const Rat& to) {
    if (S[static_cast<std::size_t>(idx0)] == to) return;
    ShiftStep st;
    st.kind = kind;
    st.iteration = iteration;
    st.candidate = idx0;
    st.from = S[static_cast<std::size_t>(idx0)];
    st.to = to;
    S[static_cast<std::size_t>(idx0)] = to;
    bool ok = false;
    try {
      ok = is_equilibrium(S, inst).ok;
    } catch (const InstanceError&) {
      ok = false;  // move broke the profile shape itself
    }
    if (!ok)
      throw std::logic_error("equilibrium broken at step " +
                             std::to_string(trace.size() + 1));
    trace.push_back(std::move(st));
  }

  // Double reflections of candidate jj's position (1-based); candidates past
  // the last one act as sentinels with empty boundary sets.
  std::vector<Rat> b2_of(int jj) const {
    if (jj > static_cast<int>(S.size())) return {};
    return reflection_sets(S[static_cast<std::size_t>(jj - 1)], inst.voters).b2;
  }

  // Leftward phase: candidate k sits inside (x - eps, x); walk j rightwards
  // past blocking double-reflection boundaries, then move one candidate onto
  // x - eps.
  void shift_left(int k, Rat x, const Rat& eps, int iteration) {
    int j = k;  // 1-based
    while (true) {
      const Rat lo = x - eps;
      const Rat& sj = S[static_cast<std::size_t>(j - 1)];
      auto min_in_range = [&](const std::vector<Rat>& v) {
        std::optional<Rat> best;
        for (const Rat& y : v)
          if (y >= lo && y <= sj && (!best || y < *best)) best = y;
        return best;
      };
      std::optional<Rat> z1 = min_in_range(b2_of(j + 1));
      std::optional<Rat> z2 = min_in_range(b2_of(j + 2));
      if (!z1 && !z2) {
        if (j >= 2 && S[static_cast<std::size_t>(j - 2)] >= lo)
          apply(ShiftStep::Kind::ShiftLeft, iteration, j - 2, lo);
        else
          apply(ShiftStep::Kind::ShiftLeft, iteration, j - 1, lo);
        return;
      }
      if (z1 && (!z2 || *z1 <= *z2)) {
        x = next_in_bit(S[static_cast<std::size_t>(j)], iteration - 1,
                        Direction::Right, R);
        j += 1;
      } else {
        x = next_in_bit(S[static_cast<std::size_t>(j + 1)], iteration - 1,
                        Direction::Right, R);
        j += 2;
      }
    }
  }
};

}  // namespace

ShiftResult shift_to_low_bits(const Profile& S0, const Instance& inst) {
  const Rat R = interval_space(inst).R;  // throws on finite spaces
  if (!inst.voters.atoms_only())
    throw InstanceError("dyadic canonicalization requires an atoms-only voter model");
  for (const Atom& a : inst.voters.atoms)
    if (a.pos.get_den() != 1 || a.pos < 0)
      throw InstanceError("dyadic canonicalization requires voters at nonnegative integers");
  validate_profile(S0, inst);
  if (!is_equilibrium(S0, inst).ok) throw InstanceError("input not an equilibrium");

  Shifter sh{S0, inst, R, {}};
  const int m = inst.m;
  for (int i = 1; i <= m; ++i) {
    int k = 0;  // leftmost candidate off bit(i-1), 1-based; 0 = none
    for (int j = 1; j <= m; ++j) {
      std::optional<int> lvl = bit_level(sh.S[static_cast<std::size_t>(j - 1)]);
      if (!lvl || *lvl > i - 1) {
        k = j;
        break;
      }
    }
    if (k == 0) return {sh.S, sh.trace};

    Rat x = next_in_bit(sh.S[static_cast<std::size_t>(k - 1)], i - 1, Direction::Right, R);
    Rat eps = Rat(1) / Rat(Int(1) << i);
    if (k + 1 <= m && sh.S[static_cast<std::size_t>(k)] <= x - eps) {
      // Two-candidate move: the right neighbour leap-frogs to x - eps/2
      // first, then candidate k lands on x - eps.
      sh.apply(ShiftStep::Kind::ShiftRight, i, k, x - eps / 2);
      sh.apply(ShiftStep::Kind::ShiftRight, i, k - 1, x - eps);
    } else if (sh.S[static_cast<std::size_t>(k - 1)] <= x - eps) {
      sh.apply(ShiftStep::Kind::ShiftRight, i, k - 1, x - eps);
    } else {
      sh.shift_left(k, x, eps, i);
    }

    int on_grid = 0;
    for (int j = 1; j <= m; ++j) {
      std::optional<int> lvl = bit_level(sh.S[static_cast<std::size_t>(j - 1)]);
      if (lvl && *lvl <= i) ++on_grid;
    }
    if (on_grid < std::min(i, m))
      throw std::logic_error("canonicalization progress invariant failed at iteration " +
                             std::to_string(i));
  }
  return {sh.S, sh.trace};
}

std::optional<Profile> solve_grid(const Instance& inst) {
  const Rat R = interval_space(inst).R;
  if (!inst.voters.atoms_only())
    throw InstanceError("grid solving requires an atoms-only voter model");
  for (const Atom& a : inst.voters.atoms)
    if (a.pos.get_den() != 1 || a.pos < 0)
      throw InstanceError("grid solving requires voters at nonnegative integers");

  const int m = inst.m;
  Int scale = Int(1) << m;
  Int kmax = floor_int(R * Rat(scale));
  if (kmax + 1 > Int(static_cast<unsigned long>(grid_limit())))
    throw InstanceError("grid limit exceeded");

  std::vector<Rat> points;
  points.reserve(static_cast<std::size_t>(kmax.get_ui()) + 1);
  for (Int k = 0; k <= kmax; ++k) points.push_back(Rat(k) / Rat(scale));

  ContinuousEvaluator eval(inst.voters);
  DpOptions opts{DpMode::Exact, 0};
  std::optional<Profile> S = dp_solve(points, inst.voters, m, opts, eval);
  if (S && !is_equilibrium(*S, inst).ok)
    throw std::logic_error("grid solver produced a non-equilibrium profile");
  return S;
}

HardInstance gen_hard(int k) {
  if (k < 1) throw InstanceError("k must be >= 1");
  const int n = 4 * k + 2;
  const int m = 3 * k + 2;

  HardInstance h;
  h.instance.m = m;
  h.instance.space = IntervalSpace{Rat(n + 1)};
  for (int t = 1; t <= n; ++t) h.instance.voters.atoms.push_back({Rat(t), Rat(1)});

  std::vector<Rat> pos(static_cast<std::size_t>(m) + 1);  // 1-based
  for (int l = 1; l <= k; ++l) {
    Rat off = Rat(1) / Rat(Int(1) << (k - l + 1));
    pos[static_cast<std::size_t>(3 * l - 2)] = Rat(4 * l - 2) - off;
    pos[static_cast<std::size_t>(3 * l)] = Rat(4 * l) - off;
    pos[static_cast<std::size_t>(3 * l + 2)] = Rat(4 * l + 2) - off;
  }
  pos[2] = 2;
  pos[static_cast<std::size_t>(m - 1)] = n - 1;
  h.profile.assign(pos.begin() + 1, pos.end());

  validate_profile(h.profile, h.instance);
  if (!is_equilibrium(h.profile, h.instance).ok)
    throw std::logic_error("hard instance generator produced a non-equilibrium");
  return h;
}

}  // namespace hoteq
