#include "ratlog/formula.hpp"

#include <functional>

namespace ratlog {

struct Formula::Node {
  Op op;
  unsigned index = 0;
  Rational q;
  std::vector<Formula> kids;
  std::size_t size = 1;
  std::size_t connectives = 0;
};

Formula Formula::var(unsigned index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  return Formula(std::move(n));
}

Formula Formula::constant(const Rational& q) {
  if (!q.in_unit_interval()) throw InputError("constant " + q.str() + " lies outside [0,1]");
  if (q.is_zero()) return zero();
  if (q.is_one()) return one();
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->q = q;
  return Formula(std::move(n));
}

Formula Formula::zero() {
  static const Formula z = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Zero;
    return Formula(std::move(n));
  }();
  return z;
}

Formula Formula::one() {
  static const Formula o = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::One;
    return Formula(std::move(n));
  }();
  return o;
}

Formula Formula::binary(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = 1 + a.size() + b.size();
  n->connectives = 1 + a.connectives() + b.connectives();
  n->kids.push_back(std::move(a));
  n->kids.push_back(std::move(b));
  return Formula(std::move(n));
}

Formula Formula::meet(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::join(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::fuse(Formula a, Formula b) { return binary(Op::Fuse, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return binary(Op::Imp, std::move(a), std::move(b)); }

Op Formula::op() const { return node_->op; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::connectives() const { return node_->connectives; }

unsigned Formula::var_index() const {
  if (node_->op != Op::Var) throw std::logic_error("var_index on a non-variable");
  return node_->index;
}

const Rational& Formula::value() const {
  if (node_->op != Op::Const) throw std::logic_error("value on a non-constant");
  return node_->q;
}

const Formula& Formula::lhs() const {
  if (node_->kids.size() != 2) throw std::logic_error("lhs on a leaf");
  return node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (node_->kids.size() != 2) throw std::logic_error("rhs on a leaf");
  return node_->kids[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->op != b.node_->op || a.node_->size != b.node_->size) return false;
  switch (a.node_->op) {
    case Op::Var: return a.node_->index == b.node_->index;
    case Op::Const: return a.node_->q == b.node_->q;
    case Op::Zero:
    case Op::One: return true;
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->op <=> b.node_->op; c != 0) return c;
  switch (a.node_->op) {
    case Op::Var: return a.node_->index <=> b.node_->index;
    case Op::Const: return a.node_->q <=> b.node_->q;
    case Op::Zero:
    case Op::One: return std::strong_ordering::equal;
    default:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
  }
}

// ---------------------------------------------------------------------------

Formula neg(const Formula& a) { return Formula::imp(a, Formula::zero()); }

Formula equiv(const Formula& a, const Formula& b) {
  return Formula::fuse(Formula::imp(a, b), Formula::imp(b, a));
}

Formula power(const Formula& a, unsigned n) {
  if (n == 0) throw InputError("power with exponent 0");
  Formula acc = a;
  for (unsigned i = 1; i < n; ++i) acc = Formula::fuse(a, acc);
  return acc;
}

Formula oplus(const Formula& a, const Formula& b) { return neg(Formula::fuse(neg(a), neg(b))); }

Formula join_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::zero();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::join(acc, parts[i]);
  return acc;
}

namespace {

void collect(const Formula& f, std::set<unsigned>* vars, std::set<Rational>* consts) {
  switch (f.op()) {
    case Op::Var:
      if (vars) vars->insert(f.var_index());
      return;
    case Op::Const:
      if (consts) consts->insert(f.value());
      return;
    case Op::Zero:
    case Op::One: return;
    default:
      collect(f.lhs(), vars, consts);
      collect(f.rhs(), vars, consts);
  }
}

}  // namespace

std::set<unsigned> variables_of(const Formula& f) {
  std::set<unsigned> out;
  collect(f, &out, nullptr);
  return out;
}

std::set<Rational> constants_of(const Formula& f) {
  std::set<Rational> out;
  collect(f, nullptr, &out);
  return out;
}

Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.op()) {
    case Op::Var: {
      auto it = s.find(f.var_index());
      return it == s.end() ? f : it->second;
    }
    case Op::Const:
    case Op::Zero:
    case Op::One: return f;
    case Op::And: return Formula::meet(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Or: return Formula::join(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Fuse: return Formula::fuse(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Imp: return Formula::imp(substitute(f.lhs(), s), substitute(f.rhs(), s));
  }
  return f;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  for (const auto& [v, image] : inner) out.emplace(v, substitute(image, outer));
  for (const auto& [v, image] : outer) out.emplace(v, image);  // no-op where inner already mapped v
  return out;
}

Quasiequation rule_to_quasiequation(const Rule& r) {
  Quasiequation q{{}, {r.conclusion, Formula::one()}};
  for (const auto& g : r.premises) q.premises.push_back({g, Formula::one()});
  return q;
}

std::set<unsigned> variables_of(const Quasiequation& q) {
  std::set<unsigned> out;
  auto add = [&](const Equation& e) {
    collect(e.lhs, &out, nullptr);
    collect(e.rhs, &out, nullptr);
  };
  for (const auto& e : q.premises) add(e);
  add(q.conclusion);
  return out;
}

std::set<Rational> constants_of(const Quasiequation& q) {
  std::set<Rational> out;
  auto add = [&](const Equation& e) {
    collect(e.lhs, nullptr, &out);
    collect(e.rhs, nullptr, &out);
  };
  for (const auto& e : q.premises) add(e);
  add(q.conclusion);
  return out;
}

std::set<unsigned> variables_of(const Rule& r) { return variables_of(rule_to_quasiequation(r)); }
std::set<Rational> constants_of(const Rule& r) { return constants_of(rule_to_quasiequation(r)); }

}  // namespace ratlog
