#ifndef RATLOG_LUK_HPP
#define RATLOG_LUK_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratlog/chains.hpp"
#include "ratlog/formula.hpp"
#include "ratlog/verdict.hpp"

namespace ratlog {

// sum_v coef[v] * x_v + constant  REL  0
struct LinearConstraint {
  enum class Rel { Le, Lt, Eq };
  std::map<unsigned, Rational> coef;  // zero coefficients are never stored
  Rational constant;
  Rel rel = Rel::Le;

  bool ground() const { return coef.empty(); }
  // Truth value of a ground constraint.
  bool holds_ground() const;
  bool holds(const Assignment& a) const;  // unassigned variables read as 0
  std::string str() const;
};

// Affine expression over variables, used for the piecewise-linear pieces.
struct LinExpr {
  std::map<unsigned, Rational> coef;
  Rational constant;

  static LinExpr var(unsigned v);
  static LinExpr value(const Rational& q);
  LinExpr operator+(const LinExpr& o) const;
  LinExpr operator-(const LinExpr& o) const;
  LinExpr scaled(const Rational& k) const;
  bool ground() const { return coef.empty(); }
};

LinearConstraint make_constraint(const LinExpr& e, LinearConstraint::Rel rel);  // e REL 0

// Exact satisfiability over the rationals; on SAT returns a point of the
// solution set for every variable that occurs in the system.
std::optional<Assignment> fourier_motzkin(const std::vector<LinearConstraint>& constraints);

struct LukOptions {
  bool prune = true;  // run an FM feasibility check at every guard
};

struct LukStats {
  std::size_t guards = 0;  // non-ground guards on the deepest path
  std::size_t leaves = 0;  // complete guard assignments reached
  std::size_t fm_calls = 0;
};

struct LukValid {
  LukStats stats;
};
struct LukCountermodel {
  Assignment assignment;
  LukStats stats;
};
using LukVerdict = Verdict<LukValid, LukCountermodel>;

// Validity of a quasiequation in the rational Łukasiewicz chain. Total.
LukVerdict luk_quasieq(const Quasiequation& q, const LukOptions& opts = {});
LukVerdict luk_consequence(const Rule& rule, const LukOptions& opts = {});
// Rational Łukasiewicz logic is hereditarily structurally complete, so
// admissibility and derivability coincide.
LukVerdict luk_admissible(const Rule& rule, const LukOptions& opts = {});

// n-fold ⊕-sum of a, left nested; n >= 1.
Formula oplus_power(const Formula& a, unsigned n);

struct ImplicitDefinition {
  unsigned defined;            // forced to r
  std::vector<unsigned> aux;   // the variable forced to 1/n
  std::vector<Equation> equations;
};

// For r = m/n in (0,1): (n-1)u ≈ ¬u forces u = 1/n, then z ≈ m·u.
// Fresh variables are taken from `first_fresh` upward.
ImplicitDefinition implicit_definition(const Rational& r, unsigned first_fresh);

struct ConstantFree {
  Quasiequation quasi;
  std::map<Rational, unsigned> provenance;  // constant -> replacing variable
};

// Replaces every c_r with r in (0,1) by a fresh variable and appends its
// defining equations to the premises. Zero and One stay.
ConstantFree eliminate_constants(const Quasiequation& q);

struct FiniteRefutation {
  unsigned n;
  std::map<unsigned, unsigned> assignment;  // grid indices: value k/n
};

// Exhaustive search of Ł_{n+1}, n = 1..n_max. Rejects constants c_r.
std::optional<FiniteRefutation> finite_chain_refute(const Quasiequation& q, unsigned n_max);

}  // namespace ratlog

#endif  // RATLOG_LUK_HPP
