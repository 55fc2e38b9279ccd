// Continuous-density approximation: quantile profiles, the snapping grid,
// the approximate solver's three routes, and the paired-profile structural
// conditions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "hoteq/contdp.hpp"
#include "hoteq/measure.hpp"
#include "hoteq/model.hpp"
#include "hoteq/verify.hpp"

using namespace hoteq;

namespace {

Rat rq(const std::string& s) { return rat_from_string(s); }

Profile prof(std::initializer_list<const char*> xs) {
  Profile s;
  for (const char* x : xs) s.push_back(rq(x));
  return s;
}

Instance uniform01(int m) {
  Instance inst;
  inst.m = m;
  inst.space = IntervalSpace{Rat(1)};
  inst.voters.density = {{Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  inst.density_bound = Rat(1);
  return inst;
}

// Triangle on [0, 2], peak 1 at x = 1; total mass 1.
Instance triangle(int m) {
  Instance inst;
  inst.m = m;
  inst.space = IntervalSpace{Rat(2)};
  inst.voters.density = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(0)}};
  inst.density_bound = Rat(1);
  return inst;
}

// Three triangular bumps on [0, 8]: peaks 2/5, 1/5, 2/5 at 1, 4, 7; mass 1.
Instance bumps(int m) {
  Instance inst;
  inst.m = m;
  inst.space = IntervalSpace{Rat(8)};
  const char* xs[] = {"0", "1", "2", "3", "4", "5", "6", "7", "8"};
  const char* fs[] = {"0", "2/5", "0", "0", "1/5", "0", "0", "2/5", "0"};
  for (int i = 0; i < 9; ++i) inst.voters.density.push_back({rq(xs[i]), rq(fs[i])});
  inst.density_bound = rq("2/5");
  return inst;
}

struct EnvGuard {
  std::string name;
  EnvGuard(const char* n, const char* value) : name(n) { setenv(n, value, 1); }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("quantile profiles split the mass evenly") {
  SUBCASE("uniform voters") {
    CHECK(quantile_profile(uniform01(2)) == prof({"1/3", "2/3"}));
    CHECK(quantile_profile(uniform01(4)) == prof({"1/5", "2/5", "3/5", "4/5"}));
    CHECK(quantile_profile(uniform01(1)) == prof({"1/2"}));
  }
  SUBCASE("bumpy voters land on exact rational quantiles") {
    CHECK(quantile_profile(bumps(4)) == prof({"1", "2", "5", "7"}));
  }
  SUBCASE("irrational quantiles are bracketed") {
    Profile S = quantile_profile(triangle(2));
    REQUIRE(S.size() == 2);
    CHECK(S[0] < S[1]);
    Rat tol = Rat(Int(1), Int(1) << 55);
    CHECK(abs(cdf(triangle(2).voters, S[0]) - rq("1/3")) <= tol);
    CHECK(abs(cdf(triangle(2).voters, S[1]) - rq("2/3")) <= tol);
  }
  SUBCASE("atom models are rejected") {
    Instance inst;
    inst.m = 2;
    inst.space = IntervalSpace{Rat(10)};
    inst.voters.atoms = {{Rat(0), Rat(1)}, {Rat(10), Rat(1)}};
    CHECK_THROWS_AS((void)quantile_profile(inst), InstanceError);
  }
}

TEST_CASE("the snapping grid tiles the interval") {
  Instance inst = uniform01(2);
  SUBCASE("exact divisors keep the raw pitch") {
    AlphaGrid g = alpha_grid(inst, rq("1/4"));
    CHECK(g.alpha == rq("1/16"));
    CHECK(g.points.size() == 17);
    g = alpha_grid(inst, rq("1/10"));
    CHECK(g.alpha == rq("1/40"));
    CHECK(g.points.size() == 41);
    g = alpha_grid(inst, rq("1/80"));
    CHECK(g.points.size() == 321);
  }
  SUBCASE("rough pitches shrink to tile exactly") {
    AlphaGrid g = alpha_grid(inst, rq("3/10"));  // raw pitch 3/40 does not tile
    CHECK(g.alpha == rq("1/14"));
    CHECK(g.alpha <= rq("3/40"));
    REQUIRE(g.points.size() == 15);
    for (size_t i = 0; i < g.points.size(); ++i) CHECK(g.points[i] == Rat(i) * g.alpha);
    CHECK(g.points.back() == 1);
  }
  SUBCASE("a declared density bound is mandatory") {
    Instance bare = uniform01(2);
    bare.density_bound.reset();
    CHECK_THROWS_AS((void)alpha_grid(bare, rq("1/4")), InstanceError);
    bare.density_bound = Rat(0);
    CHECK_THROWS_AS((void)alpha_grid(bare, rq("1/4")), InstanceError);
  }
  SUBCASE("the point budget is enforced") {
    CHECK_THROWS_AS((void)alpha_grid(inst, rq("1/10"), 10), InstanceError);
  }
}

TEST_CASE("approximate solving routes by epsilon") {
  SUBCASE("nonpositive epsilon is rejected") {
    CHECK_THROWS_AS((void)solve_cc(uniform01(2), Rat(0)), InstanceError);
    CHECK_THROWS_AS((void)solve_cc(uniform01(2), Rat(-1)), InstanceError);
  }
  SUBCASE("large epsilon takes the quantile shortcut") {
    Instance inst = uniform01(3);
    ApproxResult r = solve_cc(inst, rq("1/2"));  // 1/2 >= W/(4m) = 1/12
    CHECK(r.kind == ApproxResult::Kind::QuantileFallback);
    CHECK(r.profile == prof({"1/4", "1/2", "3/4"}));
    CHECK(r.guarantee == rq("1/4"));
    CHECK(!r.certifies_no_eps_equilibrium);
    CHECK(is_eps_equilibrium(r.profile, inst, r.guarantee).ok);
  }
  SUBCASE("small epsilon solves on the grid") {
    Instance inst = uniform01(2);
    ApproxResult r = solve_cc(inst, rq("1/100"));
    CHECK(r.kind == ApproxResult::Kind::GridDP);
    CHECK(r.profile == prof({"183/400", "1/2"}));
    CHECK(r.guarantee == rq("1/25"));
    CHECK(is_eps_equilibrium(r.profile, inst, r.guarantee).ok);
  }
  SUBCASE("three contenders on uniform voters at moderate epsilon") {
    Instance inst = uniform01(3);
    ApproxResult r = solve_cc(inst, rq("1/20"));
    CHECK(r.kind == ApproxResult::Kind::GridDP);
    CHECK(r.profile == prof({"21/80", "19/40", "11/16"}));
    CHECK(r.guarantee == rq("1/5"));
    CHECK(is_eps_equilibrium(r.profile, inst, r.guarantee).ok);
  }
  SUBCASE("a failed grid search certifies nonexistence") {
    Instance inst = uniform01(3);
    ApproxResult r = solve_cc(inst, rq("1/40"));
    CHECK(r.kind == ApproxResult::Kind::QuantileFallback);
    CHECK(r.certifies_no_eps_equilibrium);
    REQUIRE(r.refuted_eps.has_value());
    CHECK(*r.refuted_eps == rq("1/40"));
    CHECK(r.profile == prof({"1/4", "1/2", "3/4"}));
    CHECK(r.guarantee == rq("1/4"));
  }
  SUBCASE("an over-fine grid trips the point budget") {
    CHECK_THROWS_AS((void)solve_cc(uniform01(2), rq("1/1000000")), InstanceError);
  }
  SUBCASE("atom and finite inputs are rejected") {
    Instance atoms;
    atoms.m = 2;
    atoms.space = IntervalSpace{Rat(10)};
    atoms.voters.atoms = {{Rat(0), Rat(1)}, {Rat(10), Rat(1)}};
    CHECK_THROWS_AS((void)solve_cc(atoms, rq("1/10")), InstanceError);
  }
}

TEST_CASE("epsilon-free solving brackets by halving") {
  SUBCASE("the point budget ends the descent") {
    EnvGuard cap("HOTEQ_GRID_LIMIT", "600");
    Instance inst = uniform01(2);
    ApproxResult r = solve_cc(inst, std::nullopt);
    CHECK(r.kind == ApproxResult::Kind::BinarySearchBracket);
    REQUIRE(r.eps_high.has_value());
    CHECK(*r.eps_high == rq("1/128"));  // 1/256 would need 1025 grid points
    CHECK(!r.eps_low.has_value());      // no attempt ever failed
    CHECK(r.guarantee == rq("1/32"));
    CHECK(is_eps_equilibrium(r.profile, inst, r.guarantee).ok);
  }
  SUBCASE("the epsilon floor ends the descent") {
    EnvGuard floor("HOTEQ_EPS_FLOOR", "1/32");
    Instance inst = uniform01(2);
    ApproxResult r = solve_cc(inst, std::nullopt);
    CHECK(r.kind == ApproxResult::Kind::BinarySearchBracket);
    REQUIRE(r.eps_high.has_value());
    CHECK(*r.eps_high == rq("1/32"));
    CHECK(!r.eps_low.has_value());
    CHECK(r.guarantee == rq("1/8"));
    CHECK(is_eps_equilibrium(r.profile, inst, r.guarantee).ok);
  }
  SUBCASE("a failing level is recorded as the lower bracket") {
    // For three contenders the first level W/(8m) = 1/24 already fails
    // (1/24 < 1/40 would be needed... the grid refutes 1/24), leaving the
    // quantile fallback with the failing level recorded.
    EnvGuard floor("HOTEQ_EPS_FLOOR", "1/24");
    Instance inst = uniform01(3);
    ApproxResult r = solve_cc(inst, std::nullopt);
    if (r.kind == ApproxResult::Kind::QuantileFallback) {
      CHECK(r.certifies_no_eps_equilibrium);
      REQUIRE(r.refuted_eps.has_value());
      CHECK(*r.refuted_eps == rq("1/24"));
    } else {
      // The first level succeeded after all: it must be the bracket top.
      CHECK(*r.eps_high == rq("1/24"));
    }
  }
}

TEST_CASE("paired-profile structural conditions") {
  const Rat d5 = rq("1/1000");
  SUBCASE("three bumps with two hugging pairs and a centre candidate") {
    Instance inst = bumps(5);
    Profile S = prof({"1999/2000", "2001/2000", "4", "13999/2000", "14001/2000"});
    ElReport r = el_conditions(S, inst, d5);
    CHECK(r.c1);
    CHECK(r.c2);
    CHECK(r.c3);
    CHECK(r.c4);
    CHECK(r.all());
  }
  SUBCASE("a uniform hugging pair passes") {
    Instance inst = uniform01(2);
    Profile S = prof({"99/200", "101/200"});
    ElReport r = el_conditions(S, inst, rq("1/100"));
    CHECK(r.all());
  }
  SUBCASE("spread-out candidates are not paired") {
    Instance inst = uniform01(2);
    ElReport r = el_conditions(prof({"1/4", "3/4"}), inst, rq("1/100"));
    CHECK(!r.c2);
    CHECK(r.c1);
    CHECK(r.c3);
    CHECK(r.c4);
    CHECK(!r.all());
  }
  SUBCASE("a pair on a rising slope fails the dominance condition") {
    Instance inst = bumps(3);
    Profile S = prof({"999/2000", "1001/2000", "2"});
    ElReport r = el_conditions(S, inst, d5);
    CHECK(!r.c4);  // density at the pair midpoint 1/2 undercuts the right edge
    CHECK(!r.c2);  // and the rightmost candidate is unpaired
  }
  SUBCASE("an unpaired interior candidate needs equal midpoint densities") {
    Instance inst = bumps(3);
    ElReport r = el_conditions(prof({"0", "1", "3"}), inst, d5);
    CHECK(!r.c3);  // densities 1/5 at 1/2 versus 0 at 2
  }
  SUBCASE("lopsided windows break the one-sided bound") {
    Instance inst = uniform01(2);
    ElReport r = el_conditions(prof({"1/5", "2/5"}), inst, rq("1/100"));
    CHECK(!r.c1);  // the right candidate's right side 3/5 beats the minimum 3/10
  }
  SUBCASE("bad inputs are rejected") {
    Instance atoms;
    atoms.m = 2;
    atoms.space = IntervalSpace{Rat(10)};
    atoms.voters.atoms = {{Rat(0), Rat(1)}, {Rat(10), Rat(1)}};
    CHECK_THROWS_AS((void)el_conditions(prof({"1", "2"}), atoms, rq("1/100")),
                    InstanceError);
    CHECK_THROWS_AS((void)el_conditions(prof({"1/4", "3/4"}), uniform01(2), Rat(0)),
                    InstanceError);
  }
}
