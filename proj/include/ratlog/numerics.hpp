#ifndef RATLOG_NUMERICS_HPP
#define RATLOG_NUMERICS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace ratlog {

using Integer = mpz_class;

// Exact fraction kept in lowest terms with a positive denominator.
// Truth values are the members of [0,1]; negative values only show up
// as coefficients inside the linear-arithmetic layer.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long value) : num_(value), den_(1) {}  // NOLINT: implicit on purpose
  Rational(Integer num, Integer den);

  // Accepts "m", "m/n" and "-m/n". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }
  bool is_negative() const { return num_ < 0; }
  bool in_unit_interval() const { return num_ >= 0 && num_ <= den_; }

  // "m/n", or "m" when the denominator is 1.
  std::string str() const;

  Rational operator-() const { return Rational(-num_, den_, Canonical{}); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational pow(unsigned exponent) const;

private:
  struct Canonical {};
  Rational(Integer num, Integer den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  Integer num_;
  Integer den_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Multiplicative decomposition of a positive rational: prime -> exponent.
// Zero exponents are never stored.
class PrimePowerVector {
public:
  PrimePowerVector() = default;
  static PrimePowerVector of(const Rational& positive);

  const std::map<Integer, long>& exponents() const { return exps_; }
  long exponent(const Integer& prime) const;
  void add(const Integer& prime, long exponent);
  bool empty() const { return exps_.empty(); }

  // Product of prime^exponent; negative exponents land in the denominator.
  Rational value() const;

  PrimePowerVector& operator+=(const PrimePowerVector& o);
  PrimePowerVector& operator-=(const PrimePowerVector& o);
  friend bool operator==(const PrimePowerVector&, const PrimePowerVector&) = default;

private:
  std::map<Integer, long> exps_;
};

// Trial division with a 2,3 wheel. n must be >= 1.
PrimePowerVector factorize(const Integer& n);

bool is_prime(const Integer& n);

// Exact rational n-th root of p in [0,1], or nullopt when the root is
// irrational. Decided by divisibility of every prime exponent by n.
std::optional<Rational> nth_root_rational(const Rational& p, unsigned n);

// The enumeration schedule of [0,1] ∩ Q used by every refuter:
// 0, 1, then for d = 2, 3, ... the reduced fractions k/d in increasing order.
// Every rational with denominator <= d occurs within the first
// rational_prefix_length(d) entries, each exactly once.
class RationalStream {
public:
  // i-th element of the schedule (0-based); cached, so amortised O(1).
  const Rational& at(std::size_t index);

private:
  void extend();

  std::vector<Rational> items_;
  long next_den_ = 1;
};

std::vector<Rational> enumerate_rationals(std::size_t budget);

// 1 + sum_{k <= d} phi(k): the prefix length that covers denominators <= d.
std::size_t rational_prefix_length(unsigned max_den);

// Diagonal schedule over index tuples of a fixed arity: stage s emits, in
// lexicographic order, the tuples over {0..s-1} that use the index s-1.
// Every tuple of naturals is reached after finitely many steps.
class TupleSchedule {
public:
  explicit TupleSchedule(std::size_t arity) : arity_(arity) {}

  // Next tuple, or nullopt once arity 0 has produced its single empty tuple.
  // If `domain_size` is set the indices stay below it and the schedule ends.
  std::optional<std::vector<std::size_t>> next();
  void limit_domain(std::size_t domain_size) { domain_ = domain_size; }

private:
  bool advance_within_stage();
  bool start_stage();

  std::size_t arity_;
  std::optional<std::size_t> domain_;
  std::size_t stage_ = 0;  // current maximal index + 1
  std::vector<std::size_t> current_;
  bool started_ = false;
  bool finished_ = false;
};

}  // namespace ratlog

#endif  // RATLOG_NUMERICS_HPP
