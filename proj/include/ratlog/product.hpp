#ifndef RATLOG_PRODUCT_HPP
#define RATLOG_PRODUCT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratlog/chains.hpp"
#include "ratlog/formula.hpp"
#include "ratlog/verdict.hpp"

namespace ratlog {

// c_q \/ z |- z  (ConstJoin, q in (0,1)) and
// (c_p <-> x^n) \/ z |- z  (RootJoin, n-th root of p irrational).
struct BaseRule {
  enum class Kind { ConstJoin, RootJoin };
  Kind kind = Kind::ConstJoin;
  Rational p;  // q for ConstJoin
  unsigned n = 1;

  std::string str() const;  // "const 1/2", "root 1/2^(1/2)"
  friend bool operator==(const BaseRule&, const BaseRule&) = default;
};

// The schema instance with x = x1, z = x2, or nullopt when the n-th root of
// p is rational.
std::optional<Rule> base_rule_instance(const Rational& p, unsigned n);

struct DovetailBudget {
  std::size_t max_tuples = 100000;
  std::size_t max_depth = 6;
  std::size_t max_steps = 10000;
};

// ---------------------------------------------------------------------------
// Countermodel search.

// The three rational product chains used for refutation. Faithful is the
// canonical chain; the other two interpret every c_q with q > 0 as 1.
enum class ProductChain { Faithful, Trivialized, Boolean };
std::string to_string(ProductChain c);

Rational eval_product_chain(const Formula& f, ProductChain chain, const Assignment& a);
bool product_satisfies(const Quasiequation& q, ProductChain chain, const Assignment& a);

// Fair enumeration of assignments in the chain's carrier, resumable in
// chunks. The Boolean chain is finite, so its search can finish.
class ProductRefuter {
public:
  ProductRefuter(const Quasiequation& q, ProductChain chain);

  // Tries up to `tuples` more assignments.
  std::optional<Assignment> advance(std::size_t tuples);
  std::size_t spent() const { return spent_; }
  bool finished() const { return finished_; }

private:
  Quasiequation q_;
  ProductChain chain_;
  std::vector<unsigned> vars_;
  TupleSchedule schedule_;
  RationalStream stream_;
  std::size_t spent_ = 0;
  bool finished_ = false;
};

// First failing assignment in schedule order within the tuple budget.
std::optional<Assignment> refute_in_QPiQ(const Quasiequation& q, const DovetailBudget& budget);

// ---------------------------------------------------------------------------
// Derivations.

struct Justification {
  enum class Kind { Premise, Theorem, ModusPonens, BaseRuleCut, Monotone };
  Kind kind = Kind::Premise;
  std::size_t i = 0, j = 0;  // referenced steps (MP: i = antecedent, j = implication)
  std::string schema;        // Theorem
  BaseRule base;             // BaseRuleCut
};

struct DerivationStep {
  Formula formula;
  Justification why;
};

using Derivation = std::vector<DerivationStep>;

// Name of the whitelisted theorem schema matching f, if any.
std::optional<std::string> whitelisted_theorem(const Formula& f);
// Instantiates every schema on random formulas and evaluates the instances
// in all three chains. Returns the names of schemas that failed.
std::vector<std::string> whitelist_self_check(std::uint64_t seed, std::size_t rounds);

// The base rule (if any) that licenses removing disjunct `d`.
std::optional<BaseRule> base_rule_for_disjunct(const Formula& d);

// Independent replay. Returns an empty string when every step checks,
// otherwise a description of the first bad step.
std::string check_derivation(const Rule& rule, const Derivation& d, bool allow_base_rules);

// Bounded forward search. With allow_base_rules = false only rules derivable
// in rational product logic are used.
std::optional<Derivation> derive_with_base(const Rule& rule, const DovetailBudget& budget,
                                           bool allow_base_rules = true);

// ---------------------------------------------------------------------------
// Admissibility and derivability.

struct VacuousPremise {
  std::size_t premise;  // index of a ground premise that is never 1
  Rational value;       // its value in the canonical chain
};

struct ProductCertificate {
  std::optional<Derivation> derivation;
  std::optional<VacuousPremise> vacuous;
  bool ground = false;  // variable-free rule, settled by one evaluation
};

struct ProductCountermodel {
  ProductChain chain = ProductChain::Faithful;
  Assignment assignment;
};

using ProductVerdict = Verdict<ProductCertificate, ProductCountermodel>;

struct DovetailSchedule {
  std::size_t tuples_per_round = 512;  // refuter work between derivation rounds
};

ProductVerdict product_admissible(const Rule& rule, const DovetailBudget& budget = {},
                                  const DovetailSchedule& schedule = {});
ProductVerdict product_derivable_sound(const Rule& rule, const DovetailBudget& budget = {},
                                       const DovetailSchedule& schedule = {});

// ---------------------------------------------------------------------------

struct PscForm {
  bool matches = false;
  Rational q;
  std::vector<std::pair<Rational, unsigned>> roots;  // (p_i, n_i)
  std::string reason;                                // why it does not match
};

// c_q \/ (x1^n1 <-> c_p1) \/ ... |- 0 with q, p_i in [0,1) and every
// n_i-th root of p_i irrational. Disjunct order and bracketing are free.
PscForm psc_rule_form(const Rule& rule);

enum class RpaLevel { Trivial, Boolean, PAstar, RPA };
std::string to_string(RpaLevel l);

struct RpaProbe {
  RpaLevel level = RpaLevel::RPA;
  bool bounded = true;  // only refutations are definitive
  // For every level above the answer: the equation index and assignment
  // that failed there.
  std::vector<std::pair<RpaLevel, std::pair<std::size_t, Assignment>>> refutations;
};

RpaProbe rpa_subvariety_probe(const std::vector<Equation>& eqs, const DovetailBudget& budget = {});

}  // namespace ratlog

#endif  // RATLOG_PRODUCT_HPP
