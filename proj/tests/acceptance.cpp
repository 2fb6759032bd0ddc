// Acceptance suite: one PASS/FAIL line per criterion, with wall time.
// Expected values come from the oracles in support/ or from direct
// evaluation; nothing here is read back from the engines under test.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ratlog/chains.hpp"
#include "ratlog/godel.hpp"
#include "ratlog/luk.hpp"
#include "ratlog/product.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace ratlog;

namespace {

Rational q(long n, long d) { return Rational(Integer(n), Integer(d)); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; keeps the first few messages.
struct Tally {
  std::size_t cases = 0, failures = 0;
  std::vector<std::string> first;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (first.size() < 3) first.push_back(what);
  }

  Outcome outcome(const std::string& extra = "") const {
    std::ostringstream s;
    s << cases << " checks, " << failures << " failed";
    if (!extra.empty()) s << "; " << extra;
    for (const auto& f : first) s << "; e.g. " << f;
    return {failures == 0, s.str()};
  }
};

std::vector<Rational> unit_rationals(long max_den) { return oracle::rational_grid(max_den); }

// 1: base rules of the product logic.
Outcome base_rules() {
  Tally t;
  std::size_t admissible = 0, refuted = 0;
  for (const auto& p : unit_rationals(10)) {
    for (unsigned n = 1; n <= 4; ++n) {
      Formula x = Formula::var(1), z = Formula::var(2);
      Rule rule{{Formula::join(equiv(Formula::constant(p), power(x, n)), z)}, z};
      bool irrational = !nth_root_rational(p, n).has_value();
      auto v = product_admissible(rule);
      std::string tag = p.str() + "^(1/" + std::to_string(n) + ")";
      if (irrational) {
        t.check(v.is_yes(), tag + " not admissible");
        if (v.is_yes() && v.yes_witness().derivation)
          t.check(check_derivation(rule, *v.yes_witness().derivation, true).empty(), tag + " derivation replay");
        admissible += v.is_yes();
      } else {
        bool verified = v.is_no() && !product_satisfies(rule_to_quasiequation(rule), ProductChain::Faithful,
                                                        v.no_witness().assignment);
        t.check(verified, tag + " lacks a verified countermodel");
        refuted += verified;
      }
    }
  }
  return t.outcome(std::to_string(admissible) + " admissible, " + std::to_string(refuted) + " refuted");
}

// 2: c_{1/2} \/ z |- z is admissible but not derivable in both logics.
Outcome incompleteness_witnesses() {
  Tally t;
  Rule r{{Formula::join(Formula::constant(q(1, 2)), Formula::var(1))}, Formula::var(1)};
  Quasiequation quasi = rule_to_quasiequation(r);
  auto timed = [](auto&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto v = f();
    return std::make_pair(std::move(v), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };

  auto [ga, tga] = timed([&] { return godel_admissible(r, GodelExtension::rg()); });
  auto [gd, tgd] = timed([&] { return godel_derivable(r, GodelExtension::rg()); });
  t.check(ga.is_yes(), "RG: not admissible");
  t.check(gd.is_no() && gd.no_witness().chain.str() == "Qr 1/4", "RG: witness chain is not Qr 1/4");
  if (gd.is_no()) t.check(!godel_satisfies(quasi, gd.no_witness().chain, gd.no_witness().assignment), "RG: witness");
  t.check(tga < 1 && tgd < 1, "RG check slower than 1 s");

  auto [pa, tpa] = timed([&] { return product_admissible(r); });
  auto [pd, tpd] = timed([&] { return product_derivable_sound(r); });
  t.check(pa.is_yes(), "RP: not admissible");
  t.check(pd.is_no() && pd.no_witness().chain == ProductChain::Trivialized, "RP: not refuted in the trivialized chain");
  if (pd.is_no()) t.check(!product_satisfies(quasi, pd.no_witness().chain, pd.no_witness().assignment), "RP: witness");
  t.check(tpa < 1 && tpd < 1, "RP check slower than 1 s");
  return t.outcome();
}

bool luk_holds(const Quasiequation& qe, const Assignment& a) {
  for (const auto& e : qe.premises)
    if (eval_luk_rational(e.lhs, a) != eval_luk_rational(e.rhs, a)) return true;
  return eval_luk_rational(qe.conclusion.lhs, a) == eval_luk_rational(qe.conclusion.rhs, a);
}

// 3: admissibility and consequence coincide for the Łukasiewicz logic.
Outcome luk_hsc() {
  Tally t;
  testgen::Gen g(0xacc3);
  testgen::Gen::FormulaShape s;
  s.vars = 3;
  s.depth = 4;
  s.max_den = 6;
  s.const_weight = 0.25;
  auto grid = oracle::rational_grid(6);
  std::size_t valid = 0, refuted = 0;
  for (int i = 0; i < 80; ++i) {
    Rule r = g.rule(s, 2, 8);
    Quasiequation quasi = rule_to_quasiequation(r);
    auto adm = luk_admissible(r);
    auto con = luk_consequence(r);
    t.check(adm.is_yes() == con.is_yes(), to_string(r) + ": verdicts differ");
    for (const auto* v : {&adm, &con}) {
      if (v->is_no()) t.check(!luk_holds(quasi, v->no_witness().assignment), to_string(r) + ": countermodel");
    }
    if (con.is_yes()) {
      ++valid;
      t.check(!oracle::rational_brute_force(quasi, grid, eval_luk_rational), to_string(r) + ": grid countermodel");
    } else {
      ++refuted;
    }
  }
  return t.outcome(std::to_string(valid) + " valid, " + std::to_string(refuted) + " refuted");
}

// 4: order diagrams against brute force over finite Gödel chains.
Outcome godel_diagrams() {
  Tally t;
  testgen::Gen g(0xacc4);
  testgen::Gen::FormulaShape s;
  s.vars = 2;
  s.depth = 3;
  s.const_weight = 0.35;
  s.constants = {Rational(0), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4), Rational(1)};
  std::vector<GodelChainSpec> chains;
  for (auto p : {Rational(0), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)})
    for (unsigned n = 0; n <= 3; ++n) chains.push_back(GodelChainSpec::qp(p, Ordinal::finite(n)));
  std::size_t refuted = 0;
  for (int i = 0; i < 250; ++i) {
    Quasiequation quasi = g.quasiequation(s, 2, 6);
    for (const auto& chain : chains) {
      bool brute = oracle::godel_brute_force(quasi, chain, oracle::godel_grid(chain, 36, 3)).has_value();
      bool engine = check_quasieq_in_chain(quasi, chain).is_no();
      t.check(engine == brute, to_string(quasi.conclusion) + " in " + chain.str());
      refuted += brute;
    }
  }
  return t.outcome(std::to_string(refuted) + " refutations");
}

// 5: the variety order on 20 generators. Expected values from the side
// conditions, then confirmed by the axioms of the larger variety.
Outcome variety_table() {
  Tally t;
  std::vector<GodelChainSpec> gens;
  for (auto r : {q(1, 4), q(1, 3), q(1, 2), q(3, 4)}) gens.push_back(GodelChainSpec::qr(r));
  for (auto p : {Rational(0), q(1, 4), q(1, 2), q(2, 3)})
    for (auto gamma : {Ordinal::finite(0), Ordinal::finite(1), Ordinal::finite(3), Ordinal::infinite()})
      gens.push_back(GodelChainSpec::qp(p, gamma));
  using K = GodelChainSpec::Kind;
  auto expected = [](const GodelChainSpec& a, const GodelChainSpec& b) {
    if (a.kind == K::Qr && b.kind == K::Qr) return a.param <= b.param;
    if (a.kind == K::Qr) return a.param <= b.param;
    if (b.kind == K::Qr) return a.param < b.param;
    return a.param < b.param || (a.param == b.param && a.gamma <= b.gamma);
  };
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& a : gens)
    for (const auto& b : gens) t.check(variety_leq(a, b) == expected(a, b), a.str() + " <= " + b.str());
  double leq_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.check(leq_secs < 1, "variety_leq grid slower than 1 s");

  // Semantic confirmation: the axioms of V(b) hold in a iff a is in V(b).
  // The constant schema is infinite; it is sampled on denominators <= 24,
  // which puts a constant strictly between any two distinct parameters.
  auto t1 = std::chrono::steady_clock::now();
  auto sample = oracle::rational_grid(24);
  std::set<Rational> mentioned(sample.begin(), sample.end());
  auto holds = [](const Formula& f, const GodelChainSpec& a) {
    return check_quasieq_in_chain(Quasiequation{{}, {f, Formula::one()}}, a).is_yes();
  };
  for (const auto& b : gens) {
    auto ax = variety_axioms(b, mentioned);
    for (const auto& a : gens) {
      bool all_hold = true;
      for (const auto& c : ax.instances) all_hold = all_hold && holds(Formula::constant(c), a);
      if (all_hold && ax.width) all_hold = holds(*ax.width, a);
      t.check(all_hold == expected(a, b), "axioms of " + b.str() + " in " + a.str());
    }
  }
  double ax_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  char timing[96];
  std::snprintf(timing, sizeof timing, "variety_leq %.3f s, axiom confirmation %.2f s", leq_secs, ax_secs);
  return t.outcome(std::to_string(gens.size()) + "x" + std::to_string(gens.size()) + " grid, " + timing);
}

// 6: constant-free Łukasiewicz verdicts against finite chains and a grid.
Outcome luk_finite() {
  Tally t;
  testgen::Gen g(0xacc6);
  testgen::Gen::FormulaShape s;
  s.vars = 2;
  s.depth = 3;
  s.const_weight = 0.15;
  s.constants = {Rational(0), Rational(1)};
  auto grid = oracle::rational_grid(12);
  std::size_t valid = 0, refuted = 0;
  for (int i = 0; i < 400; ++i) {
    Quasiequation quasi = g.quasiequation(s, 2, 6);
    auto v = luk_quasieq(quasi);
    auto fin = finite_chain_refute(quasi, 12);
    t.check(v.is_no() == fin.has_value(), to_string(quasi.conclusion) + ": finite chains disagree");
    if (v.is_yes()) {
      ++valid;
      t.check(!oracle::rational_brute_force(quasi, grid, eval_luk_rational), to_string(quasi.conclusion) + ": grid");
    } else {
      ++refuted;
    }
  }
  return t.outcome(std::to_string(valid) + " valid, " + std::to_string(refuted) + " refuted");
}

// 7: Γ_X(inv_X) = 1 and Γ_{X\{p}}(inv_X) != 1.
Outcome gadget() {
  Tally t;
  auto is_top = [](const AXElement& e) {
    for (const auto& c : e)
      if (c.square() != Rational(1)) return false;
    return true;
  };
  std::vector<std::set<Integer>> xs{{2}, {3}, {2, 3}, {2, 3, 5}};
  for (const auto& X : xs) {
    std::map<unsigned, AXElement> a{{1, inv_X(X)}};
    t.check(is_top(eval_in_AX(gamma_formula(X, 1), X, a)), "Gamma_X(inv_X) != 1");
    for (const auto& p : X) {
      std::set<Integer> smaller = X;
      smaller.erase(p);
      t.check(!is_top(eval_in_AX(gamma_formula(smaller, 1), X, a)), "Gamma without " + p.get_str() + " is 1");
    }
  }
  return t.outcome();
}

// 8: residuated-lattice laws and bookkeeping on every chain type.
template <class V>
struct Algebra {
  std::string name;
  std::function<V(std::mt19937_64&)> sample;
  std::function<V(const Formula&, const std::map<unsigned, V>&)> eval;
  bool has_constants = true;
  std::function<Rational(const Rational&, const Rational&)> fuse_q;  // target operation on constants
  std::function<Rational(const Rational&, const Rational&)> imp_q;
  std::function<bool(const V&, const V&)> leq;
};

template <class V>
void bl_laws(const Algebra<V>& alg, Tally& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Formula x = Formula::var(1), y = Formula::var(2), z = Formula::var(3);
  Formula xy = Formula::fuse(x, y), y_to_z = Formula::imp(y, z);
  Formula prelin = Formula::join(Formula::imp(x, y), Formula::imp(y, x));
  Formula meet = Formula::meet(x, y), div = Formula::fuse(x, Formula::imp(x, y));
  for (int i = 0; i < 10000; ++i) {
    std::map<unsigned, V> a{{1, alg.sample(rng)}, {2, alg.sample(rng)}, {3, alg.sample(rng)}};
    V top = alg.eval(Formula::one(), a);
    bool lhs = alg.leq(alg.eval(xy, a), a.at(3));
    bool rhs = alg.leq(a.at(1), alg.eval(y_to_z, a));
    t.check(lhs == rhs, alg.name + ": residuation");
    t.check(alg.eval(prelin, a) == top, alg.name + ": prelinearity");
    t.check(alg.eval(meet, a) == alg.eval(div, a), alg.name + ": divisibility");
  }
  if (!alg.has_constants) return;
  auto grid = oracle::rational_grid(12);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  for (int i = 0; i < 10000; ++i) {
    Rational p = grid[pick(rng)], r = grid[pick(rng)];
    Formula cp = Formula::constant(p), cr = Formula::constant(r);
    std::map<unsigned, V> none;
    t.check(alg.eval(Formula::fuse(cp, cr), none) == alg.eval(Formula::constant(alg.fuse_q(p, r)), none),
            alg.name + ": bookkeeping * at " + p.str() + "," + r.str());
    t.check(alg.eval(Formula::imp(cp, cr), none) == alg.eval(Formula::constant(alg.imp_q(p, r)), none),
            alg.name + ": bookkeeping -> at " + p.str() + "," + r.str());
  }
}

Outcome bl_suites() {
  Tally t;
  auto rat = [](long max_den) {
    return [max_den](std::mt19937_64& rng) {
      long d = std::uniform_int_distribution<long>(1, max_den)(rng);
      return Rational(Integer(std::uniform_int_distribution<long>(0, d)(rng)), Integer(d));
    };
  };
  auto rat_leq = [](const Rational& a, const Rational& b) { return a <= b; };
  auto luk_fuse = [](const Rational& a, const Rational& b) { return max(Rational(0), a + b - Rational(1)); };
  auto luk_imp = [](const Rational& a, const Rational& b) { return min(Rational(1), Rational(1) - a + b); };
  auto prod_imp = [](const Rational& a, const Rational& b) { return a <= b ? Rational(1) : b / a; };
  auto godel_imp = [](const Rational& a, const Rational& b) { return a <= b ? Rational(1) : b; };

  bl_laws(Algebra<Rational>{"QLQ", rat(60), eval_luk_rational, true, luk_fuse, luk_imp, rat_leq}, t, 81);
  bl_laws(Algebra<Rational>{"QPiQ", rat(60),
                            [](const Formula& f, const Assignment& a) { return eval_product_rational(f, a); }, true,
                            [](const Rational& a, const Rational& b) { return a * b; }, prod_imp, rat_leq},
          t, 82);

  for (auto chain : {GodelChainSpec::qr(q(1, 2)), GodelChainSpec::qp(q(1, 3), Ordinal::infinite()),
                     GodelChainSpec::qp(q(1, 2), Ordinal::finite(2))}) {
    auto carrier = oracle::godel_grid(chain, 24, 4);
    Algebra<GodelValue> alg{
        chain.str(),
        [carrier](std::mt19937_64& rng) {
          return carrier[std::uniform_int_distribution<std::size_t>(0, carrier.size() - 1)(rng)];
        },
        [chain](const Formula& f, const GodelAssignment& a) { return eval_godel(f, chain, a); },
        true,
        [](const Rational& a, const Rational& b) { return min(a, b); },
        godel_imp,
        [](const GodelValue& a, const GodelValue& b) { return a <= b; }};
    bl_laws(alg, t, 83);
  }

  for (unsigned n : {4u, 12u}) {
    Algebra<unsigned> mv{"MV" + std::to_string(n + 1),
                         [n](std::mt19937_64& rng) { return std::uniform_int_distribution<unsigned>(0, n)(rng); },
                         [n](const Formula& f, const std::map<unsigned, unsigned>& a) { return eval_finite_mv(f, n, a); },
                         false, nullptr, nullptr, [](unsigned a, unsigned b) { return a <= b; }};
    bl_laws(mv, t, 84);
    t.check(check_bookkeeping(finite_mv_table(n), Flavor::Luk).empty(), mv.name + ": table bookkeeping");
  }

  std::set<Integer> X{2, 3};
  Algebra<AXElement> ax{
      "A_{2,3}",
      [X](std::mt19937_64& rng) {
        AXElement e;
        for (std::size_t k = 0; k < X.size(); ++k) {
          SqrtRational v(Rational(Integer(std::uniform_int_distribution<long>(0, 6)(rng)), Integer(6)));
          if (std::uniform_int_distribution<int>(0, 1)(rng)) v = v * SqrtRational::inv_sqrt(2) * SqrtRational(q(1, 2));
          e.push_back(v);
        }
        return e;
      },
      [X](const Formula& f, const std::map<unsigned, AXElement>& a) { return eval_in_AX(f, X, a); },
      true,
      [](const Rational& a, const Rational& b) { return a * b; },
      prod_imp,
      [](const AXElement& a, const AXElement& b) {
        for (std::size_t k = 0; k < a.size(); ++k)
          if (a[k] > b[k]) return false;
        return true;
      }};
  bl_laws(ax, t, 85);

  t.check(check_bookkeeping(trivialized_product_table({q(1, 2), q(1, 3), Rational(0)}), Flavor::Prod).empty(),
          "trivialized table bookkeeping");
  return t.outcome();
}

// 9: the passive-rule schema recognizer.
Outcome psc_schema() {
  Tally t;
  const char* positive[] = {
      "#1/2 \\/ (x1^2 <-> #1/2) |- 0",
      "#1/3 |- 0",
      "0 |- 0",
      "#2/3 \\/ (x1^2 <-> #1/3) \\/ (x2^3 <-> #1/2) |- 0",
      "(#1/2 <-> x1^2) \\/ #1/4 |- 0",
      "#1/5 \\/ (x3^4 <-> #1/8) |- 0",
      "#1/2 \\/ ((x1^2 <-> #2/3) \\/ (x1^3 <-> #2/3)) |- 0",
      "#9/10 \\/ (x2^2 <-> #3/4) |- 0",
      "(x1^3 <-> #1/4) \\/ (x2^2 <-> #1/2) \\/ #1/7 |- 0",
      "#1/2 \\/ (x1^4 <-> #4/9) |- 0",
  };
  const char* negative[] = {
      "#1/2 \\/ (x1^2 <-> #1/4) |- 0",        // root of 1/4 is rational
      "#1/2 \\/ (x1^3 <-> #1/8) |- 0",        // root of 1/8 is rational
      "#1/2 \\/ (x1 <-> #1/2) |- 0",          // n = 1
      "#1/2 \\/ (x1^2 <-> 0) |- 0",           // root of 0
      "#1/2 \\/ (x1^4 <-> #1/16) |- 0",       // root of 1/16 is rational
      "(x1^2 <-> #1/2) |- 0",                 // no constant disjunct
      "#1/2 \\/ #1/3 |- 0",                   // two constant disjuncts
      "1 |- 0",                               // q = 1
      "#1/2 \\/ (x1^2 <-> #1/2) |- x1",       // conclusion is not 0
      "#1/2 \\/ ((x1 * x2)^2 <-> #1/2) |- 0", // base is not a variable
  };
  std::size_t rational_root_pos = 0, rational_root_neg = 0;
  for (const char* text : positive) {
    auto f = psc_rule_form(parse_rule(text));
    t.check(f.matches, std::string(text) + " rejected: " + f.reason);
    for (const auto& [p, n] : f.roots) rational_root_pos += !nth_root_rational(p, n);
  }
  for (const char* text : negative) {
    auto f = psc_rule_form(parse_rule(text));
    t.check(!f.matches, std::string(text) + " accepted");
    rational_root_neg += f.reason.find("rational") != std::string::npos;
  }
  t.check(rational_root_pos > 0 && rational_root_neg >= 4, "side condition not exercised on both sides");
  return t.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all{
      {1, "product base rules admissible iff the root is irrational", 10, base_rules},
      {2, "c_{1/2} \\/ z |- z admissible, not derivable (RG and RP)", 2, incompleteness_witnesses},
      {3, "Lukasiewicz admissibility equals consequence", 60, luk_hsc},
      {4, "Godel order diagrams match finite-chain brute force", 300, godel_diagrams},
      {5, "Godel variety order truth table", 120, variety_table},
      {6, "Lukasiewicz verdicts match finite chains", 300, luk_finite},
      {7, "square-root gadget separates Gamma_X", 1, gadget},
      {8, "residuation, prelinearity, divisibility, bookkeeping", 30, bl_suites},
      {9, "passive-rule schema recognizer", 1, psc_schema},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.limit_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s #%d %s (%.2f s, limit %.0f s): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_s,
                o.detail.c_str(), in_time ? "" : "; over time limit");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
