#include <set>

#include "doctest.h"
#include "ratlog/numerics.hpp"

using namespace ratlog;

namespace {

Rational q(long n, long d) { return Rational(Integer(n), Integer(d)); }

// Naive primality by full trial division; independent of factorize().
bool naive_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("rational normalisation and parsing") {
  CHECK(q(2, 4) == q(1, 2));
  CHECK(q(3, -6) == q(-1, 2));
  CHECK(Rational::parse("6/8") == q(3, 4));
  CHECK(Rational::parse("-1/3").is_negative());
  CHECK(Rational::parse("7").str() == "7");
  CHECK(q(2, 6).str() == "1/3");
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("a/2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK(q(1, 3) < q(1, 2));
  CHECK(q(1, 2) * q(2, 3) == q(1, 3));
  CHECK(q(1, 2) - q(3, 4) == q(-1, 4));
  CHECK(q(2, 3).pow(3) == q(8, 27));
}

TEST_CASE("factorize examples") {
  auto twelve = factorize(12);
  CHECK(twelve.exponents().size() == 2);
  CHECK(twelve.exponent(2) == 2);
  CHECK(twelve.exponent(3) == 1);
  CHECK(factorize(1).empty());
  auto p97 = factorize(97);
  REQUIRE(naive_prime(97));
  CHECK(p97.exponents().size() == 1);
  CHECK(p97.exponent(97) == 1);
}

TEST_CASE("factorize recomposes every n up to 1e5") {
  for (long n = 1; n <= 100000; ++n) {
    auto f = factorize(n);
    Integer prod = 1;
    for (const auto& [p, e] : f.exponents()) {
      REQUIRE(e > 0);
      REQUIRE(naive_prime(p.get_si()));
      for (long i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("nth_root_rational examples") {
  CHECK(nth_root_rational(q(1, 4), 2) == q(1, 2));
  CHECK_FALSE(nth_root_rational(q(1, 2), 2).has_value());
  CHECK(nth_root_rational(Rational(1), 7) == Rational(1));
  CHECK(nth_root_rational(Rational(0), 3) == Rational(0));
  CHECK(nth_root_rational(q(8, 27), 3) == q(2, 3));
  CHECK_FALSE(nth_root_rational(q(1, 4), 4).has_value());
  CHECK_THROWS(nth_root_rational(q(3, 2), 2));
}

TEST_CASE("nth_root_rational agrees with a bounded-denominator sweep") {
  // Oracle: search a/b with b <= 10^4 and (a/b)^n = p, using integer n-th
  // roots from GMP rather than factorisation.
  for (long den = 1; den <= 12; ++den) {
    for (long num = 0; num <= den; ++num) {
      Rational p = q(num, den);
      if (p.den() != den) continue;
      for (unsigned n = 1; n <= 4; ++n) {
        auto root = nth_root_rational(p, n);
        if (root) {
          CHECK(root->pow(n) == p);
          continue;
        }
        bool found = false;
        for (long b = 1; b <= 10000 && !found; ++b) {
          Integer bn;
          mpz_pow_ui(bn.get_mpz_t(), Integer(b).get_mpz_t(), n);
          Integer target = p.num() * bn;  // need a^n * den = target
          if (!mpz_divisible_p(target.get_mpz_t(), p.den().get_mpz_t())) continue;
          target /= p.den();
          Integer a;
          if (mpz_root(a.get_mpz_t(), target.get_mpz_t(), n) != 0) found = true;
        }
        CHECK_MESSAGE(!found, "missed rational root of " << p.str() << " order " << n);
      }
    }
  }
}

TEST_CASE("enumerate_rationals schedule") {
  auto first = enumerate_rationals(3);
  REQUIRE(first.size() == 3);
  CHECK(first[0] == Rational(0));
  CHECK(first[1] == Rational(1));
  CHECK(first[2] == q(1, 2));

  auto fifty = enumerate_rationals(50);
  std::set<Rational> seen(fifty.begin(), fifty.end());
  CHECK(seen.size() == 50);
  for (const auto& r : fifty) {
    CHECK(r.in_unit_interval());
    Integer g;
    mpz_gcd(g.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    CHECK(g == 1);
  }

  auto longer = enumerate_rationals(120);
  CHECK(std::equal(fifty.begin(), fifty.end(), longer.begin()));
}

TEST_CASE("enumerate_rationals covers denominators <= d within L(d)") {
  for (unsigned d = 1; d <= 20; ++d) {
    std::set<Rational> sweep;
    for (long b = 1; b <= static_cast<long>(d); ++b)
      for (long a = 0; a <= b; ++a) sweep.insert(q(a, b));
    std::size_t len = rational_prefix_length(d);
    auto prefix = enumerate_rationals(len);
    std::set<Rational> got(prefix.begin(), prefix.end());
    CHECK(got.size() == len);
    CHECK(got == sweep);
  }
}

TEST_CASE("tuple schedule is a fair, duplicate-free diagonal") {
  for (std::size_t arity = 1; arity <= 3; ++arity) {
    TupleSchedule sched(arity);
    std::set<std::vector<std::size_t>> seen;
    const std::size_t side = 5;
    std::size_t expected = 1;
    for (std::size_t i = 0; i < arity; ++i) expected *= side;
    for (std::size_t i = 0; i < expected; ++i) {
      auto t = sched.next();
      REQUIRE(t.has_value());
      REQUIRE(t->size() == arity);
      for (auto v : *t) CHECK(v < side);
      CHECK(seen.insert(*t).second);
    }
    CHECK(seen.size() == expected);
  }
  TupleSchedule empty(0);
  CHECK(empty.next().has_value());
  CHECK_FALSE(empty.next().has_value());

  TupleSchedule bounded(2);
  bounded.limit_domain(2);
  int count = 0;
  while (bounded.next()) ++count;
  CHECK(count == 4);
}
