#ifndef RATLOG_TESTS_GEN_HPP
#define RATLOG_TESTS_GEN_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ratlog/formula.hpp"

namespace ratlog::testgen {

// Seeded generators for property tests. Everything here is deterministic
// given the seed.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Rational unit_rational(long max_den) {
    long d = range(1, max_den);
    return Rational(Integer(range(0, d)), Integer(d));
  }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(range(0, static_cast<long>(xs.size()) - 1))];
  }

  struct FormulaShape {
    unsigned vars = 3;
    unsigned depth = 4;
    long max_den = 6;
    double const_weight = 0.2;  // chance that a leaf is a constant
    std::vector<Rational> constants;  // if non-empty, constants are drawn from here
    std::vector<Op> ops{Op::And, Op::Or, Op::Fuse, Op::Imp};
  };

  Formula leaf(const FormulaShape& s) {
    if (coin(s.const_weight)) {
      if (!s.constants.empty()) return Formula::constant(pick(s.constants));
      switch (range(0, 3)) {
        case 0: return Formula::zero();
        case 1: return Formula::one();
        default: return Formula::constant(unit_rational(s.max_den));
      }
    }
    return Formula::var(static_cast<unsigned>(range(1, s.vars)));
  }

  Formula formula(const FormulaShape& s) { return formula(s, s.depth); }

  Formula formula(const FormulaShape& s, unsigned depth) {
    if (depth == 0 || coin(0.25)) return leaf(s);
    Op op = pick(s.ops);
    Formula a = formula(s, depth - 1);
    Formula b = formula(s, depth - 1);
    switch (op) {
      case Op::And: return Formula::meet(a, b);
      case Op::Or: return Formula::join(a, b);
      case Op::Fuse: return Formula::fuse(a, b);
      default: return Formula::imp(a, b);
    }
  }

  // Formula with at most `max_conn` binary connectives.
  Formula bounded_formula(const FormulaShape& s, std::size_t max_conn) {
    while (true) {
      Formula f = formula(s);
      if (f.connectives() <= max_conn) return f;
    }
  }

  // Rule with 0..max_premises premises; the whole rule stays within
  // `max_conn` connectives.
  Rule rule(const FormulaShape& s, std::size_t max_premises, std::size_t max_conn) {
    while (true) {
      Rule r{{}, bounded_formula(s, max_conn)};
      std::size_t n = static_cast<std::size_t>(range(0, static_cast<long>(max_premises)));
      std::size_t total = r.conclusion.connectives();
      for (std::size_t i = 0; i < n; ++i) {
        r.premises.push_back(bounded_formula(s, max_conn));
        total += r.premises.back().connectives();
      }
      if (total <= max_conn) return r;
    }
  }

  // Quasiequation with arbitrary equations (not only "= 1").
  Quasiequation quasiequation(const FormulaShape& s, std::size_t max_premises, std::size_t max_conn) {
    while (true) {
      Quasiequation q{{}, {bounded_formula(s, max_conn), bounded_formula(s, max_conn)}};
      std::size_t total = q.conclusion.lhs.connectives() + q.conclusion.rhs.connectives();
      std::size_t n = static_cast<std::size_t>(range(0, static_cast<long>(max_premises)));
      for (std::size_t i = 0; i < n; ++i) {
        q.premises.push_back({bounded_formula(s, max_conn), bounded_formula(s, max_conn)});
        total += q.premises.back().lhs.connectives() + q.premises.back().rhs.connectives();
      }
      if (total <= max_conn) return q;
    }
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace ratlog::testgen

#endif
