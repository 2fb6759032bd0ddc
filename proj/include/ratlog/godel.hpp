#ifndef RATLOG_GODEL_HPP
#define RATLOG_GODEL_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ratlog/chains.hpp"
#include "ratlog/formula.hpp"
#include "ratlog/verdict.hpp"

namespace ratlog {

// Axiomatic extensions of RG: RG_r (kind Qr, param r) and RG_p^gamma
// (kind Qp, param p). Each is the logic of the matching chain.
struct GodelExtension {
  GodelChainSpec chain;

  static GodelExtension rg() { return {GodelChainSpec::qr(Rational(1))}; }
  static GodelExtension rgr(const Rational& r) { return {GodelChainSpec::qr(r)}; }
  static GodelExtension rgp(const Rational& p, Ordinal gamma) { return {GodelChainSpec::qp(p, gamma)}; }
  std::string str() const;  // "RGr 1/2", "RGp 1/3 gamma=omega"
};

// Generators of the varieties of rational Gödel algebras.
using VarietyGen = GodelChainSpec;

// One cell of the abstract order picture of an assignment.
struct DiagramRegion {
  enum class Kind { Gap, Point, Tail, Top };
  Kind kind = Kind::Top;
  Rational lo, hi;       // Gap: open interval (lo,hi); Point: lo
  unsigned capacity = 0;  // Tail: number of distinct blocks allowed
};

// Each variable sits in a region; variables in the same gap or tail are
// ordered by block number (equal blocks = equal values).
struct OrderDiagram {
  std::vector<unsigned> vars;
  std::vector<std::size_t> region;  // index into regions(), per variable
  std::vector<unsigned> block;      // rank within the region, per variable

  GodelAssignment realize(const std::vector<DiagramRegion>& regions) const;
};

// Constants occurring in q, with 0 and 1 added when Zero or One occur.
std::set<Rational> mentioned_values(const Quasiequation& q);

// Regions of `chain` relative to the anchors (the interpreted constants that
// land in the rational segment), listed bottom to top.
std::vector<DiagramRegion> diagram_regions(const std::set<Rational>& constants, const GodelChainSpec& chain,
                                           std::size_t variables);

// Calls `visit` on every diagram in canonical order until it returns false.
// Returns the number of diagrams visited.
std::size_t enumerate_diagrams(const std::vector<unsigned>& vars, const std::vector<DiagramRegion>& regions,
                               const std::function<bool(const OrderDiagram&)>& visit);

struct ValidWitness {};
struct GodelCountermodel {
  GodelChainSpec chain;
  GodelAssignment assignment;
};

using GodelVerdict = Verdict<ValidWitness, GodelCountermodel>;

bool godel_satisfies(const Quasiequation& q, const GodelChainSpec& chain, const GodelAssignment& a);

// Total: Yes (valid) or No with the first failing diagram, realised.
GodelVerdict check_quasieq_in_chain(const Quasiequation& q, const GodelChainSpec& chain);

GodelVerdict godel_admissible(const Rule& rule, const GodelExtension& ext);

// Chains that decide derivability of `rule` in `ext`: one Qr per gap of the
// mentioned constants and Qp at each mentioned constant with small gamma.
std::vector<GodelChainSpec> representative_chains(const Rule& rule, const GodelExtension& ext);
GodelVerdict godel_derivable(const Rule& rule, const GodelExtension& ext);

bool variety_leq(const VarietyGen& a, const VarietyGen& b);

struct VarietyAxioms {
  Rational from;           // the schema is {c_q = 1 : q in [from,1]} or (from,1]
  bool from_closed = true;
  std::vector<Rational> instances;  // mentioned constants inside the interval
  std::optional<Formula> width;     // Qp with finite gamma only
};

VarietyAxioms variety_axioms(const VarietyGen& g, const std::set<Rational>& mentioned);
// ⋁_{0<=i<j<=n+2} (c_p \/ x_i) <-> (c_p \/ x_j), with x_i written as x_{i+1}.
Formula width_formula(const Rational& p, unsigned n);

struct ExtensionClass {
  bool sc = false, hsc = false, asc = false, psc = false;
  // For the negative case: a rule admissible but not derivable, with the
  // refuting chain found by godel_derivable.
  std::optional<Rule> witness;
  std::optional<GodelCountermodel> witness_countermodel;
};

// Extension of RG (axiomatic) or the quasivariety of a single chain.
ExtensionClass classify_extension(const GodelExtension& ext);
ExtensionClass classify_chain_quasivariety(const GodelChainSpec& chain);

}  // namespace ratlog

#endif  // RATLOG_GODEL_HPP
