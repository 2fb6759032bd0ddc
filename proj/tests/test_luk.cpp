#include "doctest.h"
#include "ratlog/luk.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace ratlog;

namespace {

Rational q(long n, long d) { return Rational(Integer(n), Integer(d)); }
using F = Formula;
using Rel = LinearConstraint::Rel;

LinearConstraint lc(std::map<unsigned, Rational> coef, Rational c, Rel rel) {
  for (auto it = coef.begin(); it != coef.end();) it = it->second.is_zero() ? coef.erase(it) : std::next(it);
  return {coef, c, rel};
}

testgen::Gen::FormulaShape mv_shape(unsigned vars) {
  testgen::Gen::FormulaShape s;
  s.vars = vars;
  s.depth = 3;
  s.const_weight = 0.15;
  s.constants = {Rational(0), Rational(1)};
  return s;
}

}  // namespace

TEST_CASE("fourier_motzkin examples") {
  auto sat = fourier_motzkin({lc({{1, 1}}, -1, Rel::Le), lc({{1, -1}}, 0, Rel::Le), lc({{1, 1}}, -1, Rel::Lt),
                              lc({{1, -2}}, 1, Rel::Le)});
  REQUIRE(sat.has_value());
  CHECK(sat->at(1) == q(1, 2));
  CHECK_FALSE(fourier_motzkin({lc({{1, 1}}, 0, Rel::Lt), lc({{1, -1}}, 0, Rel::Lt)}).has_value());
  CHECK_FALSE(fourier_motzkin({lc({}, 1, Rel::Le)}).has_value());
  CHECK(fourier_motzkin({}).has_value());
  // x + y = 1, x - y = 0  ->  x = y = 1/2
  auto eq = fourier_motzkin({lc({{1, 1}, {2, 1}}, -1, Rel::Eq), lc({{1, 1}, {2, -1}}, 0, Rel::Eq)});
  REQUIRE(eq.has_value());
  CHECK(eq->at(1) == q(1, 2));
  CHECK(eq->at(2) == q(1, 2));
  // x < y, y < x is empty; x <= y, y <= x is the diagonal
  CHECK_FALSE(fourier_motzkin({lc({{1, 1}, {2, -1}}, 0, Rel::Lt), lc({{1, -1}, {2, 1}}, 0, Rel::Lt)}).has_value());
  CHECK(fourier_motzkin({lc({{1, 1}, {2, -1}}, 0, Rel::Le), lc({{1, -1}, {2, 1}}, 0, Rel::Le)}).has_value());
}

TEST_CASE("property: fourier_motzkin agrees with a rational grid") {
  // Grid oracle: every fraction a/d with d <= 24 in [-2,2], evaluated in
  // integer arithmetic.
  struct G {
    long a, d;
  };
  std::vector<G> grid;
  for (long d = 1; d <= 24; ++d)
    for (long a = -2 * d; a <= 2 * d; ++a)
      if (std::gcd(a, d) == 1 || (a == 0 && d == 1)) grid.push_back({a, d});
  testgen::Gen g(0xf0f0);
  int sat_count = 0, unsat_count = 0;
  for (int iter = 0; iter < 250; ++iter) {
    struct C {
      long c1, c2, c0;
      Rel rel;
    };
    std::vector<C> sys;
    std::size_t m = static_cast<std::size_t>(g.range(2, 5));
    for (std::size_t i = 0; i < m; ++i) {
      Rel rel = g.coin(0.15) ? Rel::Eq : (g.coin() ? Rel::Lt : Rel::Le);
      sys.push_back({g.range(-3, 3), g.range(-3, 3), g.range(-3, 3), rel});
    }
    for (long s : {1, -1}) {  // box: -2 <= x, y <= 2
      sys.push_back({s, 0, -2, Rel::Le});
      sys.push_back({0, s, -2, Rel::Le});
    }
    std::vector<LinearConstraint> cs;
    for (const auto& c : sys) cs.push_back(lc({{1, c.c1}, {2, c.c2}}, c.c0, c.rel));
    auto fm = fourier_motzkin(cs);
    if (fm) {
      Assignment a = *fm;
      a.emplace(1, 0);
      a.emplace(2, 0);
      for (const auto& c : cs) CHECK(c.holds(a));
    }
    bool grid_hit = false;
    for (const auto& x : grid) {
      for (const auto& y : grid) {
        bool ok = true;
        for (const auto& c : sys) {
          long v = c.c1 * x.a * y.d + c.c2 * y.a * x.d + c.c0 * x.d * y.d;
          ok = c.rel == Rel::Eq ? v == 0 : c.rel == Rel::Lt ? v < 0 : v <= 0;
          if (!ok) break;
        }
        if (ok) {
          grid_hit = true;
          break;
        }
      }
      if (grid_hit) break;
    }
    if (grid_hit) CHECK(fm.has_value());
    if (!fm) CHECK_FALSE(grid_hit);
    (fm ? sat_count : unsat_count)++;
  }
  CHECK(sat_count > 30);
  CHECK(unsat_count > 30);
}

TEST_CASE("luk_consequence examples") {
  CHECK(luk_consequence(parse_rule("x1 |- x1 (+) x1")).is_yes());
  auto v = luk_consequence(parse_rule("x1 (+) x1 |- x1"));
  REQUIRE(v.is_no());
  CHECK(v.no_witness().assignment.at(1) == q(1, 2));
  CHECK(luk_consequence(parse_rule("#1/2 \\/ x1 |- x1")).is_yes());
  CHECK(luk_consequence(parse_rule("|- (x1 -> x2) \\/ (x2 -> x1)")).is_yes());
  CHECK(luk_consequence(parse_rule("|- x1 \\/ ~x1")).is_no());
}

TEST_CASE("luk_admissible examples") {
  CHECK(luk_admissible(parse_rule("x1 (+) x1 |- x1")).is_no());
  CHECK(luk_admissible(parse_rule("|- #1/2 (+) #1/2")).is_yes());
  CHECK(luk_admissible(parse_rule("#1/2 (+) #1/3 |- 0")).is_yes());
}

TEST_CASE("implicit_definition examples and uniqueness gate") {
  auto half = implicit_definition(q(1, 2), 10);
  CHECK(half.defined == 10);
  REQUIRE(half.aux.size() == 1);
  CHECK(half.equations[0] == Equation{F::var(11), neg(F::var(11))});

  auto third = implicit_definition(q(1, 3), 1);
  CHECK(third.equations[0] == Equation{oplus(F::var(2), F::var(2)), neg(F::var(2))});
  auto two_thirds = implicit_definition(q(2, 3), 1);
  CHECK(two_thirds.equations[0] == third.equations[0]);
  CHECK(two_thirds.equations[1] == Equation{F::var(1), oplus(F::var(2), F::var(2))});

  CHECK_THROWS_AS(implicit_definition(Rational(1), 1), InputError);
  CHECK_THROWS_AS(implicit_definition(Rational(0), 1), InputError);

  // The equations pin the defined variable: T0 + {z = t} is inconsistent
  // for t != r and consistent at t = r.
  for (const auto& r : oracle::rational_grid(6)) {
    if (r.is_zero() || r.is_one()) continue;
    auto d = implicit_definition(r, 1);
    for (const auto& t : oracle::rational_grid(8)) {
      Quasiequation probe{d.equations, {F::zero(), F::one()}};
      probe.premises.push_back({F::var(d.defined), F::constant(t)});
      CAPTURE(r.str());
      CAPTURE(t.str());
      CHECK(luk_quasieq(probe).is_yes() == (t != r));
    }
  }
}

TEST_CASE("eliminate_constants examples") {
  Quasiequation thm{{}, {oplus(F::constant(q(1, 2)), F::constant(q(1, 2))), F::one()}};
  auto free = eliminate_constants(thm);
  CHECK(constants_of(free.quasi).empty());
  CHECK(free.provenance.at(q(1, 2)) == 1);
  CHECK(luk_quasieq(thm).is_yes());
  CHECK(luk_quasieq(free.quasi).is_yes());
  CHECK_FALSE(finite_chain_refute(free.quasi, 6).has_value());

  Quasiequation plain{{{F::var(1), F::one()}}, {F::var(2), F::one()}};
  auto same = eliminate_constants(plain);
  CHECK(same.quasi.premises == plain.premises);
  CHECK(same.quasi.conclusion == plain.conclusion);

  Quasiequation vac{{{F::constant(q(1, 2)), F::one()}}, {F::zero(), F::one()}};
  auto vac_free = eliminate_constants(vac);
  CHECK(vac_free.quasi.premises.size() == 3);
  CHECK(luk_quasieq(vac).is_yes());
  CHECK(luk_quasieq(vac_free.quasi).is_yes());
}

TEST_CASE("finite_chain_refute examples") {
  auto r = finite_chain_refute(rule_to_quasiequation(parse_rule("x1 (+) x1 |- x1")), 2);
  REQUIRE(r.has_value());
  CHECK(r->n == 2);
  CHECK(r->assignment.at(1) == 1);
  CHECK_FALSE(finite_chain_refute(rule_to_quasiequation(parse_rule("|- x1 * (x1 -> x2) -> x2")), 8).has_value());
  CHECK_THROWS_AS(finite_chain_refute(rule_to_quasiequation(parse_rule("|- #1/2")), 3), InputError);
}

TEST_CASE("property: Łukasiewicz verdicts match finite chains and grids") {
  testgen::Gen g(0x1c1);
  auto grid = oracle::rational_grid(12);
  int refuted = 0, valid = 0;
  for (int i = 0; i < 150; ++i) {
    Quasiequation quasi = g.quasiequation(mv_shape(2), 2, 6);
    auto v = luk_quasieq(quasi);
    auto fin = finite_chain_refute(quasi, 12);
    CAPTURE(to_string(quasi.conclusion));
    CHECK(v.is_no() == fin.has_value());
    if (v.is_yes()) {
      ++valid;
      CHECK_FALSE(oracle::rational_brute_force(quasi, grid, eval_luk_rational).has_value());
    } else {
      ++refuted;
    }
  }
  CHECK(refuted > 20);
  CHECK(valid > 20);
}

TEST_CASE("property: pruning never changes verdicts; split tree is bounded") {
  testgen::Gen g(0x1c2);
  testgen::Gen::FormulaShape shape = mv_shape(3);
  shape.constants = {Rational(0), q(1, 3), q(1, 2), q(5, 6), Rational(1)};
  shape.const_weight = 0.25;
  for (int i = 0; i < 120; ++i) {
    Rule r = g.rule(shape, 2, 8);
    auto pruned = luk_consequence(r);
    auto full = luk_consequence(r, LukOptions{false});
    CHECK(pruned.is_yes() == full.is_yes());
    const LukStats& st = full.is_yes() ? full.yes_witness().stats : full.no_witness().stats;
    CHECK(st.leaves <= (std::size_t{1} << st.guards));
  }
}

TEST_CASE("property: constant elimination preserves verdicts") {
  testgen::Gen g(0x1c3);
  testgen::Gen::FormulaShape shape = mv_shape(2);
  shape.constants = {Rational(0), q(1, 3), q(1, 2), q(2, 3), Rational(1)};
  shape.const_weight = 0.3;
  for (int i = 0; i < 80; ++i) {
    Quasiequation quasi = g.quasiequation(shape, 1, 5);
    auto free = eliminate_constants(quasi);
    CHECK(luk_quasieq(quasi).is_yes() == luk_quasieq(free.quasi).is_yes());
  }
}
