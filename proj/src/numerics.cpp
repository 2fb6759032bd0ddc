#include "ratlog/numerics.hpp"

#include <numeric>
#include <stdexcept>

namespace ratlog {

Rational::Rational(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g != 1 && g != 0) {
    num_ /= g;
    den_ /= g;
  }
}

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits));
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  Integer num = parse_integer(body.substr(0, slash), text);
  Integer den = 1;
  if (slash != std::string_view::npos) den = parse_integer(body.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rational(std::move(num), std::move(den));
}

std::string Rational::str() const {
  if (den_ == 1) return num_.get_str();
  return num_.get_str() + "/" + den_.get_str();
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ - b.num_, a.den_);
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  int c = (a.den_ == b.den_) ? cmp(a.num_, b.num_) : cmp(a.num_ * b.den_, b.num_ * a.den_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(unsigned exponent) const {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), num_.get_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), den_.get_mpz_t(), exponent);
  return Rational(std::move(n), std::move(d), Canonical{});
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------

PrimePowerVector PrimePowerVector::of(const Rational& positive) {
  if (positive <= Rational(0)) throw std::domain_error("prime decomposition of a non-positive rational");
  PrimePowerVector v = factorize(positive.num());
  v -= factorize(positive.den());
  return v;
}

long PrimePowerVector::exponent(const Integer& prime) const {
  auto it = exps_.find(prime);
  return it == exps_.end() ? 0 : it->second;
}

void PrimePowerVector::add(const Integer& prime, long exponent) {
  if (exponent == 0) return;
  long& slot = exps_[prime];
  slot += exponent;
  if (slot == 0) exps_.erase(prime);
}

Rational PrimePowerVector::value() const {
  Integer num = 1, den = 1;
  for (const auto& [prime, e] : exps_) {
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    if (e > 0)
      num *= power;
    else
      den *= power;
  }
  return Rational(num, den);
}

PrimePowerVector& PrimePowerVector::operator+=(const PrimePowerVector& o) {
  for (const auto& [prime, e] : o.exps_) add(prime, e);
  return *this;
}

PrimePowerVector& PrimePowerVector::operator-=(const PrimePowerVector& o) {
  for (const auto& [prime, e] : o.exps_) add(prime, -e);
  return *this;
}

PrimePowerVector factorize(const Integer& n) {
  if (n < 1) throw std::domain_error("factorize expects a positive integer");
  PrimePowerVector out;
  Integer rest = n;
  auto strip = [&](const Integer& p) {
    long e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      ++e;
    }
    out.add(p, e);
  };
  strip(2);
  strip(3);
  // Candidates 6k-1, 6k+1.
  Integer p = 5;
  bool step_two = true;
  while (p * p <= rest) {
    strip(p);
    p += step_two ? 2 : 4;
    step_two = !step_two;
  }
  if (rest > 1) out.add(rest, 1);
  return out;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  auto f = factorize(n);
  return f.exponents().size() == 1 && f.exponent(n) == 1;
}

std::optional<Rational> nth_root_rational(const Rational& p, unsigned n) {
  if (n == 0) throw std::invalid_argument("root of order 0");
  if (!p.in_unit_interval()) throw std::invalid_argument("nth_root_rational expects p in [0,1]");
  if (p.is_zero()) return Rational(0);
  PrimePowerVector v = PrimePowerVector::of(p);
  PrimePowerVector root;
  for (const auto& [prime, e] : v.exponents()) {
    if (e % static_cast<long>(n) != 0) return std::nullopt;
    root.add(prime, e / static_cast<long>(n));
  }
  return root.value();
}

// ---------------------------------------------------------------------------

const Rational& RationalStream::at(std::size_t index) {
  while (items_.size() <= index) extend();
  return items_[index];
}

void RationalStream::extend() {
  if (next_den_ == 1) {
    items_.emplace_back(0);
    items_.emplace_back(1);
  } else {
    for (long k = 1; k < next_den_; ++k) {
      if (std::gcd(k, next_den_) == 1) items_.emplace_back(Rational(Integer(k), Integer(next_den_)));
    }
  }
  ++next_den_;
}

std::vector<Rational> enumerate_rationals(std::size_t budget) {
  RationalStream stream;
  std::vector<Rational> out;
  out.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) out.push_back(stream.at(i));
  return out;
}

std::size_t rational_prefix_length(unsigned max_den) {
  if (max_den == 0) return 0;
  std::size_t total = 1;
  for (unsigned k = 1; k <= max_den; ++k) {
    std::size_t phi = 0;
    for (unsigned j = 1; j <= k; ++j) phi += std::gcd(j, k) == 1 ? 1 : 0;
    total += phi;
  }
  return total;
}

// ---------------------------------------------------------------------------

std::optional<std::vector<std::size_t>> TupleSchedule::next() {
  if (finished_) return std::nullopt;
  if (arity_ == 0) {
    finished_ = true;
    return std::vector<std::size_t>{};
  }
  if (!started_) {
    started_ = true;
    if (!start_stage()) return std::nullopt;
    return current_;
  }
  if (advance_within_stage()) return current_;
  if (!start_stage()) return std::nullopt;
  return current_;
}

bool TupleSchedule::start_stage() {
  ++stage_;
  if (domain_ && stage_ > *domain_) {
    finished_ = true;
    return false;
  }
  // First lexicographic tuple over {0..stage-1} containing stage-1.
  current_.assign(arity_, 0);
  current_.back() = stage_ - 1;
  return true;
}

bool TupleSchedule::advance_within_stage() {
  const std::size_t top = stage_ - 1;
  while (true) {
    std::size_t pos = arity_;
    while (pos > 0) {
      --pos;
      if (current_[pos] < top) {
        ++current_[pos];
        for (std::size_t j = pos + 1; j < arity_; ++j) current_[j] = 0;
        break;
      }
      if (pos == 0) return false;
    }
    for (std::size_t v : current_) {
      if (v == top) return true;
    }
  }
}

}  // namespace ratlog
