#include "ratlog/product.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>

namespace ratlog {

namespace {

bool is_const_node(const Formula& f) {
  return f.op() == Op::Const || f.op() == Op::Zero || f.op() == Op::One;
}

Rational const_value(const Formula& f) {
  switch (f.op()) {
    case Op::Zero: return Rational(0);
    case Op::One: return Rational(1);
    default: return f.value();
  }
}

// Original (unnormalised) disjuncts, left to right.
void collect_disjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.op() == Op::Or) {
    collect_disjuncts(f.lhs(), out);
    collect_disjuncts(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

std::vector<Formula> disjuncts(const Formula& f) {
  std::vector<Formula> out;
  collect_disjuncts(f, out);
  return out;
}

// n with f == power(base, n), or 0.
unsigned power_of(const Formula& f, const Formula& base) {
  if (f == base) return 1;
  if (f.op() == Op::Fuse && f.lhs() == base) {
    unsigned m = power_of(f.rhs(), base);
    if (m) return m + 1;
  }
  return 0;
}

// The longest reading of f as base^n (n = 1 when f is not a power).
std::pair<Formula, unsigned> split_power(const Formula& f) {
  if (f.op() == Op::Fuse) {
    unsigned n = power_of(f, f.lhs());
    if (n) return {f.lhs(), n};
  }
  return {f, 1};
}

// a <-> b, recognised in the expanded form (a -> b) * (b -> a).
std::optional<std::pair<Formula, Formula>> split_equiv(const Formula& f) {
  if (f.op() != Op::Fuse) return std::nullopt;
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  if (l.op() != Op::Imp || r.op() != Op::Imp) return std::nullopt;
  if (!(l.lhs() == r.rhs() && l.rhs() == r.lhs())) return std::nullopt;
  return std::make_pair(l.lhs(), l.rhs());
}

// ----- AC normal form for the whitelist -----------------------------------

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

Formula rebuild(Op op, const std::vector<Formula>& parts) {
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    switch (op) {
      case Op::Or: acc = Formula::join(acc, parts[i]); break;
      case Op::And: acc = Formula::meet(acc, parts[i]); break;
      default: acc = Formula::fuse(acc, parts[i]); break;
    }
  }
  return acc;
}

// Sorts the arguments of the AC connectives; \/ and /\ are also idempotent.
Formula ac_normal(const Formula& f) {
  switch (f.op()) {
    case Op::Var:
    case Op::Const:
    case Op::Zero:
    case Op::One: return f;
    case Op::Imp: return Formula::imp(ac_normal(f.lhs()), ac_normal(f.rhs()));
    default: break;
  }
  std::vector<Formula> parts;
  flatten(f, f.op(), parts);
  for (auto& p : parts) p = ac_normal(p);
  std::sort(parts.begin(), parts.end());
  if (f.op() != Op::Fuse) parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  return rebuild(f.op(), parts);
}

std::set<Formula> normal_disjuncts(const Formula& f) {
  std::vector<Formula> parts;
  flatten(ac_normal(f), Op::Or, parts);
  return {parts.begin(), parts.end()};
}

// A -> B where every disjunct of A other than 0 is a disjunct of B, or B
// has 1 as a disjunct. Also covers A -> A.
bool disjunct_weakening(const Formula& f) {
  if (f.op() != Op::Imp) return false;
  auto a = normal_disjuncts(f.lhs());
  auto b = normal_disjuncts(f.rhs());
  if (b.count(Formula::one())) return true;
  for (const auto& d : a)
    if (d.op() != Op::Zero && !b.count(d)) return false;
  return true;
}

bool top_disjunct(const Formula& f) { return normal_disjuncts(f).count(Formula::one()) > 0; }

Rational prod_imp(const Rational& x, const Rational& y) { return standard_imp(Flavor::Prod, x, y); }

// c_p * c_q <-> c_pq and c_p -> c_q <-> c_(p->q), in either orientation,
// also as one-way implications.
bool bookkeeping(const Formula& f) {
  auto fits = [](const Formula& op, const Formula& c) {
    if (!is_const_node(c)) return false;
    if (op.op() != Op::Fuse && op.op() != Op::Imp) return false;
    if (!is_const_node(op.lhs()) || !is_const_node(op.rhs())) return false;
    Rational p = const_value(op.lhs()), q = const_value(op.rhs());
    Rational r = op.op() == Op::Fuse ? p * q : prod_imp(p, q);
    return r == const_value(c);
  };
  if (auto e = split_equiv(f)) return fits(e->first, e->second) || fits(e->second, e->first);
  if (f.op() == Op::Imp) return fits(f.lhs(), f.rhs()) || fits(f.rhs(), f.lhs());
  return false;
}

// ----- pattern schemas ------------------------------------------------------

constexpr unsigned kMeta = 1u << 30;

Formula M(unsigned i) { return Formula::var(kMeta + i); }

bool match(const Formula& pat, const Formula& f, std::map<unsigned, Formula>& bind) {
  if (pat.op() == Op::Var && pat.var_index() >= kMeta) {
    auto [it, fresh] = bind.try_emplace(pat.var_index(), f);
    return fresh || it->second == f;
  }
  if (pat.op() != f.op()) return false;
  switch (pat.op()) {
    case Op::Var: return pat.var_index() == f.var_index();
    case Op::Const: return pat.value() == f.value();
    case Op::Zero:
    case Op::One: return true;
    default: return match(pat.lhs(), f.lhs(), bind) && match(pat.rhs(), f.rhs(), bind);
  }
}

struct PatternSchema {
  std::string name;
  Formula pattern;
};

const std::vector<PatternSchema>& pattern_schemas() {
  static const std::vector<PatternSchema> schemas = [] {
    Formula A = M(0), B = M(1), C = M(2);
    auto I = Formula::imp;
    auto F = Formula::fuse;
    auto W = Formula::meet;
    auto J = Formula::join;
    Formula Z = Formula::zero();
    return std::vector<PatternSchema>{
        {"bl-a1", I(I(A, B), I(I(B, C), I(A, C)))},
        {"bl-a2", I(F(A, B), A)},
        {"bl-a3", I(F(A, B), F(B, A))},
        {"bl-a4", I(F(A, I(A, B)), F(B, I(B, A)))},
        {"bl-a5a", I(I(A, I(B, C)), I(F(A, B), C))},
        {"bl-a5b", I(I(F(A, B), C), I(A, I(B, C)))},
        {"bl-a6", I(I(I(A, B), C), I(I(I(B, A), C), C))},
        {"bl-a7", I(Z, A)},
        {"pi-cancel", I(neg(neg(C)), I(I(F(A, C), F(B, C)), I(A, B)))},
        {"pi-contradiction", I(W(A, neg(A)), Z)},
        {"adjunction", I(A, I(B, F(A, B)))},
        {"meet-intro", I(A, I(B, W(A, B)))},
        {"meet-elim-left", I(W(A, B), A)},
        {"meet-elim-right", I(W(A, B), B)},
        {"fuse-monotone", I(I(A, B), I(F(A, C), F(B, C)))},
        {"join-monotone", I(I(A, B), I(J(A, C), J(B, C)))},
        {"imp-monotone", I(I(A, B), I(I(C, A), I(C, B)))},
        {"imp-antitone", I(I(A, B), I(I(B, C), I(A, C)))},
        {"prelinearity", J(I(A, B), I(B, A))},
        {"divisibility", I(W(A, B), F(A, I(A, B)))},
        {"divisibility-converse", I(F(A, I(A, B)), W(A, B))},
        {"fuse-meet", I(F(A, B), W(A, B))},
    };
  }();
  return schemas;
}

std::optional<std::string> recognise(const Formula& f) {
  if (disjunct_weakening(f)) return "disjunct-weakening";
  if (top_disjunct(f)) return "top-disjunct";
  for (const auto& s : pattern_schemas()) {
    std::map<unsigned, Formula> bind;
    if (match(s.pattern, f, bind)) return s.name;
  }
  if (bookkeeping(f)) return "bookkeeping";
  return std::nullopt;
}

// ----- random instances for the load-time check ---------------------------

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  std::size_t range(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Rational unit(unsigned max_den) {
    long d = 1 + static_cast<long>(range(max_den));
    long k = static_cast<long>(range(static_cast<std::size_t>(d) + 1));
    return Rational(Integer(k), Integer(d));
  }

  Formula formula(unsigned depth) {
    if (depth == 0 || range(3) == 0) {
      switch (range(5)) {
        case 0: return Formula::constant(unit(6));
        case 1: return range(2) ? Formula::one() : Formula::zero();
        default: return Formula::var(1 + static_cast<unsigned>(range(3)));
      }
    }
    Formula a = formula(depth - 1), b = formula(depth - 1);
    switch (range(4)) {
      case 0: return Formula::meet(a, b);
      case 1: return Formula::join(a, b);
      case 2: return Formula::fuse(a, b);
      default: return Formula::imp(a, b);
    }
  }

  Formula bookkeeping_instance() {
    Rational p = unit(8), q = unit(8);
    bool fuse = range(2);
    Formula lhs = fuse ? Formula::fuse(Formula::constant(p), Formula::constant(q))
                       : Formula::imp(Formula::constant(p), Formula::constant(q));
    Formula rhs = Formula::constant(fuse ? p * q : prod_imp(p, q));
    switch (range(4)) {
      case 0: return equiv(lhs, rhs);
      case 1: return equiv(rhs, lhs);
      case 2: return Formula::imp(lhs, rhs);
      default: return Formula::imp(rhs, lhs);
    }
  }

  Formula weakening_instance() {
    std::vector<Formula> big;
    for (std::size_t i = 0, n = 1 + range(4); i < n; ++i) big.push_back(formula(2));
    std::vector<Formula> small;
    for (const auto& d : big)
      if (range(2)) small.push_back(d);
    if (range(4) == 0) small.push_back(Formula::zero());
    std::shuffle(small.begin(), small.end(), rng);
    return Formula::imp(join_all(small), join_all(big));
  }

  Assignment point(ProductChain chain) {
    Assignment a;
    for (unsigned v = 1; v <= 3; ++v)
      a[v] = chain == ProductChain::Boolean ? Rational(static_cast<long>(range(2))) : unit(12);
    return a;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::string BaseRule::str() const {
  if (kind == Kind::ConstJoin) return "const " + p.str();
  return "root " + p.str() + "^(1/" + std::to_string(n) + ")";
}

std::optional<Rule> base_rule_instance(const Rational& p, unsigned n) {
  if (n == 0) throw InputError("base rule exponent must be at least 1");
  if (!p.in_unit_interval()) throw InputError("base rule parameter outside [0,1]: " + p.str());
  if (nth_root_rational(p, n)) return std::nullopt;
  Formula x = Formula::var(1), z = Formula::var(2);
  return Rule{{Formula::join(equiv(Formula::constant(p), power(x, n)), z)}, z};
}

std::string to_string(ProductChain c) {
  switch (c) {
    case ProductChain::Faithful: return "QPiQ";
    case ProductChain::Trivialized: return "trivialized";
    default: return "boolean";
  }
}

Rational eval_product_chain(const Formula& f, ProductChain chain, const Assignment& a) {
  if (chain == ProductChain::Faithful) return eval_product_rational(f, a);
  switch (f.op()) {
    case Op::Var: {
      auto it = a.find(f.var_index());
      if (it == a.end()) throw InputError("unassigned variable x" + std::to_string(f.var_index()));
      return it->second;
    }
    case Op::Const:
    case Op::One: return Rational(1);
    case Op::Zero: return Rational(0);
    default: break;
  }
  Rational x = eval_product_chain(f.lhs(), chain, a);
  Rational y = eval_product_chain(f.rhs(), chain, a);
  switch (f.op()) {
    case Op::And: return min(x, y);
    case Op::Or: return max(x, y);
    case Op::Fuse: return x * y;
    default: return prod_imp(x, y);
  }
}

bool product_satisfies(const Quasiequation& q, ProductChain chain, const Assignment& a) {
  for (const auto& e : q.premises)
    if (eval_product_chain(e.lhs, chain, a) != eval_product_chain(e.rhs, chain, a)) return true;
  return eval_product_chain(q.conclusion.lhs, chain, a) == eval_product_chain(q.conclusion.rhs, chain, a);
}

ProductRefuter::ProductRefuter(const Quasiequation& q, ProductChain chain)
    : q_(q), chain_(chain), schedule_(0) {
  auto vs = variables_of(q);
  vars_.assign(vs.begin(), vs.end());
  schedule_ = TupleSchedule(vars_.size());
  if (chain == ProductChain::Boolean) schedule_.limit_domain(2);
}

std::optional<Assignment> ProductRefuter::advance(std::size_t tuples) {
  for (std::size_t t = 0; t < tuples && !finished_; ++t) {
    auto idx = schedule_.next();
    if (!idx) {
      finished_ = true;
      break;
    }
    ++spent_;
    Assignment a;
    for (std::size_t k = 0; k < vars_.size(); ++k) a.emplace(vars_[k], stream_.at((*idx)[k]));
    if (!product_satisfies(q_, chain_, a)) return a;
  }
  return std::nullopt;
}

std::optional<Assignment> refute_in_QPiQ(const Quasiequation& q, const DovetailBudget& budget) {
  ProductRefuter r(q, ProductChain::Faithful);
  return r.advance(budget.max_tuples);
}

// ---------------------------------------------------------------------------

std::optional<std::string> whitelisted_theorem(const Formula& f) { return recognise(f); }

std::vector<std::string> whitelist_self_check(std::uint64_t seed, std::size_t rounds) {
  Sampler s(seed);
  std::vector<std::pair<std::string, std::function<Formula()>>> makers;
  for (const auto& schema : pattern_schemas()) {
    makers.emplace_back(schema.name, [&s, &schema] {
      Substitution sub;
      for (unsigned i = 0; i < 3; ++i) sub.insert_or_assign(kMeta + i, s.formula(2));
      return substitute(schema.pattern, sub);
    });
  }
  makers.emplace_back("disjunct-weakening", [&s] { return s.weakening_instance(); });
  makers.emplace_back("top-disjunct", [&s] {
    return join_all({s.formula(2), Formula::one(), s.formula(1)});
  });
  makers.emplace_back("bookkeeping", [&s] { return s.bookkeeping_instance(); });

  std::vector<std::string> failed;
  for (auto& [name, make] : makers) {
    bool ok = true;
    for (std::size_t r = 0; r < rounds && ok; ++r) {
      Formula f = make();
      if (!recognise(f)) ok = false;
      for (auto chain : {ProductChain::Faithful, ProductChain::Trivialized, ProductChain::Boolean})
        if (ok && !eval_product_chain(f, chain, s.point(chain)).is_one()) ok = false;
    }
    if (!ok) failed.push_back(name);
  }
  return failed;
}

namespace {

void ensure_whitelist_checked() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto bad = whitelist_self_check(0x5eed, 200);
    if (!bad.empty()) throw std::logic_error("theorem whitelist schema failed its sanity check: " + bad.front());
  });
}

// Whitelist match plus a short refutation attempt in the canonical chain.
std::optional<std::string> theorem_oracle(const Formula& f) {
  static constexpr std::size_t kVerifyTuples = 64;
  auto name = recognise(f);
  if (!name) return std::nullopt;
  ProductRefuter r(Quasiequation{{}, {f, Formula::one()}}, ProductChain::Faithful);
  if (r.advance(kVerifyTuples)) return std::nullopt;
  return name;
}

}  // namespace

std::optional<BaseRule> base_rule_for_disjunct(const Formula& d) {
  if (d.op() == Op::Const) return BaseRule{BaseRule::Kind::ConstJoin, d.value(), 1};
  auto e = split_equiv(d);
  if (!e) return std::nullopt;
  for (int side = 0; side < 2; ++side) {
    const Formula& c = side == 0 ? e->first : e->second;
    const Formula& pw = side == 0 ? e->second : e->first;
    if (!is_const_node(c)) continue;
    auto [base, n] = split_power(pw);
    (void)base;
    Rational p = const_value(c);
    if (!nth_root_rational(p, n)) return BaseRule{BaseRule::Kind::RootJoin, p, n};
  }
  return std::nullopt;
}

std::string check_derivation(const Rule& rule, const Derivation& d, bool allow_base_rules) {
  if (d.empty()) return "empty derivation";
  if (!(d.back().formula == rule.conclusion)) return "last step is not the conclusion";
  auto bad = [](std::size_t k, const std::string& why) { return "step " + std::to_string(k) + ": " + why; };
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Formula& f = d[k].formula;
    const Justification& j = d[k].why;
    using K = Justification::Kind;
    switch (j.kind) {
      case K::Premise:
        if (std::find(rule.premises.begin(), rule.premises.end(), f) == rule.premises.end())
          return bad(k, "not a premise");
        break;
      case K::Theorem: {
        auto name = recognise(f);
        if (!name || *name != j.schema) return bad(k, "not an instance of " + j.schema);
        ProductRefuter r(Quasiequation{{}, {f, Formula::one()}}, ProductChain::Faithful);
        if (r.advance(64)) return bad(k, "theorem refuted in the canonical chain");
        break;
      }
      case K::ModusPonens:
        if (j.i >= k || j.j >= k) return bad(k, "forward reference");
        if (!(d[j.j].formula == Formula::imp(d[j.i].formula, f))) return bad(k, "modus ponens mismatch");
        break;
      case K::BaseRuleCut: {
        if (!allow_base_rules) return bad(k, "base rule cut not allowed here");
        if (j.i >= k) return bad(k, "forward reference");
        const Formula& src = d[j.i].formula;
        if (src.op() != Op::Or || !(src.rhs() == f)) return bad(k, "cut source is not d \\/ conclusion");
        auto br = base_rule_for_disjunct(src.lhs());
        if (!br || !(*br == j.base)) return bad(k, "removed disjunct is not an instance of " + j.base.str());
        break;
      }
      case K::Monotone:
        if (j.i >= k) return bad(k, "forward reference");
        if (f.op() != Op::Or || !(f.lhs() == d[j.i].formula || f.rhs() == d[j.i].formula))
          return bad(k, "not a disjunctive weakening of step " + std::to_string(j.i));
        break;
    }
  }
  return {};
}

namespace {

Justification just(Justification::Kind kind, std::size_t i = 0, std::size_t j = 0) {
  Justification out;
  out.kind = kind;
  out.i = i;
  out.j = j;
  return out;
}

class Deriver {
public:
  Deriver(const Rule& rule, const DovetailBudget& budget, bool allow_base)
      : rule_(rule), budget_(budget), allow_base_(allow_base) {
    ensure_whitelist_checked();
    for (const auto& p : rule.premises) add(p, just(Justification::Kind::Premise));
    close();
  }

  bool done() const { return result_.has_value() || exhausted_; }
  const std::optional<Derivation>& result() const { return result_; }
  std::size_t rounds() const { return depth_; }

  // One saturation round followed by an attempt to close the goal.
  void round() {
    if (done()) return;
    if (depth_ >= budget_.max_depth) {
      exhausted_ = true;
      return;
    }
    ++depth_;
    std::size_t before = steps_.size();
    std::size_t frontier = steps_.size();
    for (std::size_t i = 0; i < frontier && !over(); ++i) {
      if (allow_base_) cut(i);
      for (std::size_t j = 0; j < frontier && !over(); ++j) {
        const Formula& imp = steps_[j].formula;
        if (imp.op() == Op::Imp && imp.lhs() == steps_[i].formula)
          add(imp.rhs(), just(Justification::Kind::ModusPonens, i, j));
      }
    }
    close();
    if (!result_ && (over() || steps_.size() == before)) exhausted_ = true;
  }

private:
  bool over() const { return steps_.size() >= budget_.max_steps; }

  std::size_t add(const Formula& f, Justification why) {
    auto it = index_.find(f);
    if (it != index_.end()) return it->second;
    steps_.push_back({f, std::move(why)});
    index_.emplace(f, steps_.size() - 1);
    return steps_.size() - 1;
  }

  std::optional<std::size_t> theorem(const Formula& f) {
    auto it = index_.find(f);
    if (it != index_.end()) return it->second;
    auto cached = oracle_cache_.find(f);
    std::optional<std::string> name;
    if (cached != oracle_cache_.end()) {
      name = cached->second;
    } else {
      name = theorem_oracle(f);
      oracle_cache_.emplace(f, name);
    }
    if (!name) return std::nullopt;
    Justification j = just(Justification::Kind::Theorem);
    j.schema = *name;
    return add(f, j);
  }

  // From step i and a theorem step[i] -> g, derive g.
  std::optional<std::size_t> via_theorem(std::size_t i, const Formula& g) {
    if (steps_[i].formula == g) return i;
    auto t = theorem(Formula::imp(steps_[i].formula, g));
    if (!t) return std::nullopt;
    return add(g, just(Justification::Kind::ModusPonens, i, *t));
  }

  void cut(std::size_t i) {
    Formula f = steps_[i].formula;
    if (f.op() == Op::Or) {
      if (auto br = base_rule_for_disjunct(f.lhs())) {
        Justification j = just(Justification::Kind::BaseRuleCut, i);
        j.base = *br;
        add(f.rhs(), j);
        return;
      }
    }
    auto ds = disjuncts(f);
    for (std::size_t k = 0; k < ds.size() && !over(); ++k) {
      auto br = base_rule_for_disjunct(ds[k]);
      if (!br) continue;
      std::vector<Formula> rest;
      for (std::size_t m = 0; m < ds.size(); ++m)
        if (m != k) rest.push_back(ds[m]);
      Formula target = Formula::join(ds[k], join_all(rest));
      std::optional<std::size_t> src;
      if (rest.empty())
        src = add(target, just(Justification::Kind::Monotone, i));
      else
        src = via_theorem(i, target);
      if (!src) continue;
      Justification j = just(Justification::Kind::BaseRuleCut, *src);
      j.base = *br;
      add(join_all(rest), j);
      return;
    }
  }

  void close() {
    const Formula& g = rule_.conclusion;
    auto found = [&](std::size_t idx) { result_ = extract(idx); };
    if (auto it = index_.find(g); it != index_.end()) return found(it->second);
    if ((g.op() == Op::Fuse || g.op() == Op::And)) {
      auto a = index_.find(g.lhs()), b = index_.find(g.rhs());
      if (a != index_.end() && b != index_.end()) {
        std::size_t ia = a->second, ib = b->second;
        if (auto t = theorem(Formula::imp(g.lhs(), Formula::imp(g.rhs(), g)))) {
          std::size_t mid = add(Formula::imp(g.rhs(), g), just(Justification::Kind::ModusPonens, ia, *t));
          return found(add(g, just(Justification::Kind::ModusPonens, ib, mid)));
        }
      }
    }
    if (auto t = theorem(g)) return found(*t);
    for (std::size_t i = 0, n = steps_.size(); i < n && !over(); ++i)
      if (auto k = via_theorem(i, g)) return found(*k);
  }

  // Steps that `goal` depends on, renumbered.
  Derivation extract(std::size_t goal) const {
    std::set<std::size_t> need;
    std::vector<std::size_t> todo{goal};
    while (!todo.empty()) {
      std::size_t k = todo.back();
      todo.pop_back();
      if (!need.insert(k).second) continue;
      const auto& j = steps_[k].why;
      switch (j.kind) {
        case Justification::Kind::ModusPonens: todo.push_back(j.i); todo.push_back(j.j); break;
        case Justification::Kind::BaseRuleCut:
        case Justification::Kind::Monotone: todo.push_back(j.i); break;
        default: break;
      }
    }
    std::map<std::size_t, std::size_t> renum;
    Derivation out;
    for (std::size_t k : need) {
      renum[k] = out.size();
      DerivationStep s = steps_[k];
      using K = Justification::Kind;
      if (s.why.kind == K::ModusPonens || s.why.kind == K::BaseRuleCut || s.why.kind == K::Monotone)
        s.why.i = renum.at(s.why.i);
      if (s.why.kind == K::ModusPonens) s.why.j = renum.at(s.why.j);
      out.push_back(std::move(s));
    }
    return out;
  }

  Rule rule_;
  DovetailBudget budget_;
  bool allow_base_;
  std::vector<DerivationStep> steps_;
  std::map<Formula, std::size_t> index_;
  std::map<Formula, std::optional<std::string>> oracle_cache_;
  std::optional<Derivation> result_;
  std::size_t depth_ = 0;
  bool exhausted_ = false;
};

}  // namespace

std::optional<Derivation> derive_with_base(const Rule& rule, const DovetailBudget& budget, bool allow_base_rules) {
  Deriver d(rule, budget, allow_base_rules);
  while (!d.done()) d.round();
  return d.result();
}

// ---------------------------------------------------------------------------

namespace {

ProductVerdict certified(const Rule& rule, Derivation d, bool allow_base) {
  std::string err = check_derivation(rule, d, allow_base);
  if (!err.empty()) throw std::logic_error("derivation failed replay: " + err);
  ProductCertificate c;
  c.derivation = std::move(d);
  return ProductVerdict::yes(std::move(c));
}

ProductVerdict refuted(const Quasiequation& q, ProductChain chain, Assignment a) {
  if (product_satisfies(q, chain, a)) throw std::logic_error("countermodel failed re-evaluation");
  return ProductVerdict::no({chain, std::move(a)});
}

bool all_ground(const Rule& rule) {
  if (!variables_of(rule.conclusion).empty()) return false;
  for (const auto& p : rule.premises)
    if (!variables_of(p).empty()) return false;
  return true;
}

// Round-robin over the refuters and the deriver until one side answers.
ProductVerdict dovetail(const Rule& rule, const std::vector<ProductChain>& chains, bool allow_base,
                        const DovetailBudget& budget, const DovetailSchedule& schedule) {
  if (budget.max_tuples == 0 || budget.max_depth == 0 || budget.max_steps == 0)
    throw InputError("budgets must be positive");
  Quasiequation q = rule_to_quasiequation(rule);
  std::vector<ProductRefuter> refuters;
  for (auto c : chains) refuters.emplace_back(q, c);
  Deriver deriver(rule, budget, allow_base);
  std::size_t chunk = std::max<std::size_t>(1, schedule.tuples_per_round);

  auto refuter_live = [&](const ProductRefuter& r) { return !r.finished() && r.spent() < budget.max_tuples; };
  for (;;) {
    if (deriver.result()) return certified(rule, *deriver.result(), allow_base);
    bool any = false;
    for (std::size_t k = 0; k < refuters.size(); ++k) {
      auto& r = refuters[k];
      if (!refuter_live(r)) continue;
      any = true;
      if (auto a = r.advance(std::min(chunk, budget.max_tuples - r.spent()))) return refuted(q, chains[k], *a);
    }
    if (!deriver.done()) {
      deriver.round();
      any = true;
    }
    if (!any) break;
  }
  std::size_t spent = 0;
  for (const auto& r : refuters) spent += r.spent();
  return ProductVerdict::unknown({"tuples+depth", spent});
}

}  // namespace

ProductVerdict product_admissible(const Rule& rule, const DovetailBudget& budget, const DovetailSchedule& schedule) {
  for (std::size_t i = 0; i < rule.premises.size(); ++i) {
    if (!variables_of(rule.premises[i]).empty()) continue;
    Rational v = eval_product_rational(rule.premises[i], {});
    if (!v.is_one()) {
      ProductCertificate c;
      c.vacuous = VacuousPremise{i, v};
      return ProductVerdict::yes(std::move(c));
    }
  }
  if (all_ground(rule)) {
    Quasiequation q = rule_to_quasiequation(rule);
    if (!product_satisfies(q, ProductChain::Faithful, {})) return refuted(q, ProductChain::Faithful, {});
    ProductCertificate c;
    c.ground = true;
    return ProductVerdict::yes(std::move(c));
  }
  return dovetail(rule, {ProductChain::Faithful}, true, budget, schedule);
}

ProductVerdict product_derivable_sound(const Rule& rule, const DovetailBudget& budget,
                                       const DovetailSchedule& schedule) {
  return dovetail(rule, {ProductChain::Faithful, ProductChain::Trivialized, ProductChain::Boolean}, false, budget,
                  schedule);
}

// ---------------------------------------------------------------------------

PscForm psc_rule_form(const Rule& rule) {
  PscForm out;
  auto fail = [&](std::string why) {
    out.matches = false;
    out.roots.clear();
    out.reason = std::move(why);
    return out;
  };
  if (rule.premises.size() != 1) return fail("needs exactly one premise");
  if (rule.conclusion.op() != Op::Zero) return fail("conclusion is not 0");
  std::optional<Rational> q;
  for (const auto& d : disjuncts(rule.premises.front())) {
    if (is_const_node(d)) {
      if (q) return fail("more than one constant disjunct");
      q = const_value(d);
      if (q->is_one()) return fail("constant disjunct is 1");
      continue;
    }
    auto e = split_equiv(d);
    if (!e) return fail("disjunct " + to_string(d) + " is neither a constant nor an equivalence");
    std::optional<std::pair<Rational, unsigned>> hit;
    for (int side = 0; side < 2 && !hit; ++side) {
      const Formula& c = side == 0 ? e->second : e->first;
      const Formula& pw = side == 0 ? e->first : e->second;
      if (!is_const_node(c)) continue;
      auto [base, n] = split_power(pw);
      if (base.op() != Op::Var) continue;
      hit = std::make_pair(const_value(c), n);
    }
    if (!hit) return fail("disjunct " + to_string(d) + " is not x^n <-> c_p");
    if (hit->first.is_one()) return fail("root parameter is 1");
    if (nth_root_rational(hit->first, hit->second))
      return fail("root of " + hit->first.str() + " of order " + std::to_string(hit->second) + " is rational");
    out.roots.push_back(*hit);
  }
  if (!q) return fail("no constant disjunct");
  out.matches = true;
  out.q = *q;
  return out;
}

std::string to_string(RpaLevel l) {
  switch (l) {
    case RpaLevel::Trivial: return "Trivial";
    case RpaLevel::Boolean: return "Boolean";
    case RpaLevel::PAstar: return "PAstar";
    default: return "RPA";
  }
}

RpaProbe rpa_subvariety_probe(const std::vector<Equation>& eqs, const DovetailBudget& budget) {
  RpaProbe out;
  const std::pair<RpaLevel, ProductChain> levels[] = {{RpaLevel::RPA, ProductChain::Faithful},
                                                      {RpaLevel::PAstar, ProductChain::Trivialized},
                                                      {RpaLevel::Boolean, ProductChain::Boolean}};
  for (auto [level, chain] : levels) {
    std::optional<std::pair<std::size_t, Assignment>> hit;
    for (std::size_t i = 0; i < eqs.size() && !hit; ++i) {
      ProductRefuter r(Quasiequation{{}, eqs[i]}, chain);
      if (auto a = r.advance(budget.max_tuples)) hit = std::make_pair(i, *a);
    }
    if (!hit) {
      out.level = level;
      out.bounded = level != RpaLevel::Boolean && !eqs.empty();
      return out;
    }
    out.refutations.emplace_back(level, *hit);
  }
  out.level = RpaLevel::Trivial;
  out.bounded = false;
  return out;
}

}  // namespace ratlog
