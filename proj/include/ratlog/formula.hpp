#ifndef RATLOG_FORMULA_HPP
#define RATLOG_FORMULA_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratlog/numerics.hpp"

namespace ratlog {

// Base class for every user-input error (bad syntax, out-of-range values,
// malformed command options). The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Terms over the BL signature with rational constants c_q.
enum class Op : unsigned char { Var, Const, Zero, One, And, Or, Fuse, Imp };

// Immutable, structurally shared formula tree. Constants are always in
// (0,1): c_0 and c_1 are represented by Zero and One.
class Formula {
public:
  static Formula var(unsigned index);
  // Canonicalises 0 -> Zero and 1 -> One; throws InputError outside [0,1].
  static Formula constant(const Rational& q);
  static Formula zero();
  static Formula one();
  static Formula meet(Formula a, Formula b);
  static Formula join(Formula a, Formula b);
  static Formula fuse(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);

  Op op() const;
  bool is_binary() const { return op() >= Op::And; }
  unsigned var_index() const;
  const Rational& value() const;  // payload of Const
  const Formula& lhs() const;
  const Formula& rhs() const;

  // Node count.
  std::size_t size() const;
  // Number of binary connectives.
  std::size_t connectives() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula binary(Op op, Formula a, Formula b);

  std::shared_ptr<const Node> node_;
};

// Standard abbreviations, expanded into the core connectives.
Formula neg(const Formula& a);                       // a -> 0
Formula equiv(const Formula& a, const Formula& b);   // (a -> b) * (b -> a)
Formula power(const Formula& a, unsigned n);         // a * (a * (... a)), n >= 1
Formula oplus(const Formula& a, const Formula& b);   // ~(~a * ~b)
// Left-nested join of the list; Zero for an empty list.
Formula join_all(const std::vector<Formula>& parts);

std::set<unsigned> variables_of(const Formula& f);
std::set<Rational> constants_of(const Formula& f);

// Finite map from variable index to formula; unmapped variables stay put.
using Substitution = std::map<unsigned, Formula>;

Formula substitute(const Formula& f, const Substitution& s);
// outer ∘ inner: first apply `inner`, then `outer`.
Substitution compose(const Substitution& outer, const Substitution& inner);

struct Rule {
  std::vector<Formula> premises;
  Formula conclusion = Formula::zero();
};

struct Equation {
  Formula lhs = Formula::zero();
  Formula rhs = Formula::zero();
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct Quasiequation {
  std::vector<Equation> premises;
  Equation conclusion;
};

// Γ ▷ φ  ↦  τ[Γ] ⟹ τ(φ) with τ(x) = {x ≈ 1}.
Quasiequation rule_to_quasiequation(const Rule& r);

std::set<unsigned> variables_of(const Quasiequation& q);
std::set<Rational> constants_of(const Quasiequation& q);
std::set<unsigned> variables_of(const Rule& r);
std::set<Rational> constants_of(const Rule& r);

// ---------------------------------------------------------------------------
// Surface syntax.
//
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("\/" and)*
//   and     := fuse ("/\" fuse)*
//   fuse    := atom ("*" atom)*
//   atom    := power ("<->" power | "(+)" power)*
//   power   := unary ("^" int)*
//   unary   := "~" unary | "0" | "1" | "#" int "/" int | "x" int | "(" formula ")"
//
// Rules are written "g1, g2 |- f" (or "|- f").

enum class SugarOp : unsigned char { Core, Neg, Equiv, Pow, OPlus, And, Or, Fuse, Imp };

// Parse tree that may still contain abbreviations. Leaves (variables and
// constants) are stored as core formulas.
struct SugaredFormula {
  SugarOp op = SugarOp::Core;
  Formula leaf = Formula::zero();
  unsigned exponent = 0;
  std::size_t position = 0;  // source offset, for error reporting
  std::vector<SugaredFormula> args;

  static SugaredFormula lift(const Formula& f);
};

class ParseError : public InputError {
public:
  enum class Kind { Syntax, OutOfRange, ZeroExponent };
  ParseError(Kind kind, std::size_t position, const std::string& message);
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

private:
  Kind kind_;
  std::size_t position_;
};

SugaredFormula parse_sugared(const std::string& text);
// Throws ParseError(ZeroExponent) for a^0.
Formula desugar(const SugaredFormula& f);
Formula parse_formula(const std::string& text);
Rule parse_rule(const std::string& text);

std::string to_string(const Formula& f);
std::string to_string(const Rule& r);
std::string to_string(const Equation& e);

}  // namespace ratlog

#endif  // RATLOG_FORMULA_HPP
