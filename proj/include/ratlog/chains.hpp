#ifndef RATLOG_CHAINS_HPP
#define RATLOG_CHAINS_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ratlog/formula.hpp"
#include "ratlog/numerics.hpp"

namespace ratlog {

using Assignment = std::map<unsigned, Rational>;

// Rational Łukasiewicz chain: x*y = max(0, x+y-1), x->y = min(1, 1-x+y).
Rational eval_luk_rational(const Formula& f, const Assignment& a);
// Rational product chain: x*y = xy, x->y = 1 if x <= y else y/x.
Rational eval_product_rational(const Formula& f, const Assignment& a);

// Ł_{n+1} on grid indices: index k stands for k/n. Rejects constants.
unsigned eval_finite_mv(const Formula& f, unsigned n, const std::map<unsigned, unsigned>& a);

// gamma in omega + 1.
struct Ordinal {
  bool omega = false;
  unsigned n = 0;

  static Ordinal finite(unsigned k) { return {false, k}; }
  static Ordinal infinite() { return {true, 0}; }
  bool exceeds(unsigned i) const { return omega || i < n; }  // i < gamma
  std::string str() const { return omega ? "omega" : std::to_string(n); }
  friend bool operator==(const Ordinal&, const Ordinal&) = default;
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    if (a.omega != b.omega) return a.omega ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.n <=> b.n;
  }
};

// Q_r = ([0,r) ∩ Q) ∪ {1}, or Q_p^gamma = ([0,p] ∩ Q) ∪ {t_i : i < gamma} ∪ {1}.
struct GodelChainSpec {
  enum class Kind { Qr, Qp };
  Kind kind = Kind::Qr;
  Rational param = 1;  // r or p
  Ordinal gamma;       // Qp only

  static GodelChainSpec qr(const Rational& r);
  static GodelChainSpec qp(const Rational& p, Ordinal gamma);
  std::string str() const;  // "Qr 1/4", "Qp 1/2 gamma=2"
  friend bool operator==(const GodelChainSpec&, const GodelChainSpec&) = default;
};

// Element of a Gödel chain. Order: Rat (by value) < Tail (by index) < Top.
struct GodelValue {
  enum class Kind { Rat, Tail, Top };
  Kind kind = Kind::Top;
  Rational q;
  unsigned tail = 0;

  static GodelValue rat(const Rational& q) { return {Kind::Rat, q, 0}; }
  static GodelValue tail_at(unsigned i) { return {Kind::Tail, Rational(0), i}; }
  static GodelValue top() { return {Kind::Top, Rational(0), 0}; }
  std::string str() const;  // "rat 1/8", "tail 0", "top"

  friend bool operator==(const GodelValue& a, const GodelValue& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const GodelValue& a, const GodelValue& b);
};

using GodelAssignment = std::map<unsigned, GodelValue>;

bool godel_member(const GodelValue& v, const GodelChainSpec& chain);
// c_q is q when q lies in the chain's rational segment, and 1 otherwise.
GodelValue godel_constant(const Rational& q, const GodelChainSpec& chain);
GodelValue eval_godel(const Formula& f, const GodelChainSpec& chain, const GodelAssignment& a);

// ---------------------------------------------------------------------------
// coefficient * sqrt(radicand) with radicand squarefree; radicand is kept as
// its set of primes (each with exponent 1). Zero has coefficient 0 and no
// primes.
class SqrtRational {
public:
  SqrtRational() = default;
  SqrtRational(const Rational& r);  // NOLINT: rationals embed
  // 1/sqrt(p) for a prime p.
  static SqrtRational inv_sqrt(const Integer& p);

  const Rational& coefficient() const { return coef_; }
  const std::map<Integer, long>& half_exponents() const { return primes_; }
  bool is_zero() const { return coef_.is_zero(); }
  Integer radicand() const;
  // Exact square; used for all comparisons.
  Rational square() const;
  std::string str() const;  // "1/2", "1/2*sqrt(2)"

  friend SqrtRational operator*(const SqrtRational& a, const SqrtRational& b);
  friend SqrtRational operator/(const SqrtRational& a, const SqrtRational& b);
  friend bool operator==(const SqrtRational&, const SqrtRational&) = default;
  friend std::strong_ordering operator<=>(const SqrtRational& a, const SqrtRational& b) {
    return a.square() <=> b.square();
  }

private:
  Rational coef_;
  std::map<Integer, long> primes_;
};

// Element of the power [0,1]^X: one component per prime of X, in the order
// of the set.
using AXElement = std::vector<SqrtRational>;

AXElement inv_X(const std::set<Integer>& X);
AXElement eval_in_AX(const Formula& f, const std::set<Integer>& X, const std::map<unsigned, AXElement>& a);

// Left side of Γ_X(z): ⋁_{p ∈ X} (z^2 <-> c_{1/p}); Zero for empty X.
Formula gamma_formula(const std::set<Integer>& X, unsigned z);
// (Γ_X, [Γ_{X \ {p}} for p in X]).
std::pair<Formula, std::vector<Formula>> delta_formula(const std::set<Integer>& X, unsigned z);

// ---------------------------------------------------------------------------

enum class Flavor { Luk, Prod, Godel };

Rational standard_fuse(Flavor fl, const Rational& x, const Rational& y);
Rational standard_imp(Flavor fl, const Rational& x, const Rational& y);

// Finite algebra given by its operation tables; constants may be partial.
struct InterpretationTable {
  std::vector<std::string> carrier;
  std::vector<std::vector<std::size_t>> fuse;
  std::vector<std::vector<std::size_t>> imp;
  std::size_t zero = 0;
  std::size_t one = 0;
  std::map<Rational, std::size_t> constants;

  std::size_t index_of(const std::string& name) const;  // throws InputError
  // Throws InputError when the tables are not total on the carrier.
  void validate() const;

  static InterpretationTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct BookkeepingViolation {
  std::string axiom;  // "fuse", "imp", "zero", "one"
  Rational p;
  Rational q;
  std::string detail;
};

// Checks every instance of c_p*c_q = c_{p*q}, c_p->c_q = c_{p->q},
// c_0 = 0 and c_1 = 1 whose constants are all defined in the table.
std::vector<BookkeepingViolation> check_bookkeeping(const InterpretationTable& t, Flavor fl);

// Table of the standard operations restricted to `carrier` (which must
// contain 0 and 1). Products leaving the carrier are recorded as 0; every
// carrier element is its own constant.
InterpretationTable derived_table(Flavor fl, const std::vector<Rational>& carrier);
// Ł_{n+1} with constants k/n.
InterpretationTable finite_mv_table(unsigned n);
// Two-element product algebra in which c_q = 1 for q > 0 and c_0 = 0.
InterpretationTable trivialized_product_table(const std::vector<Rational>& constants);

}  // namespace ratlog

#endif  // RATLOG_CHAINS_HPP
