#include "ratlog/luk.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ratlog {

using Rel = LinearConstraint::Rel;

bool LinearConstraint::holds_ground() const {
  switch (rel) {
    case Rel::Le: return constant <= Rational(0);
    case Rel::Lt: return constant < Rational(0);
    default: return constant.is_zero();
  }
}

bool LinearConstraint::holds(const Assignment& a) const {
  Rational s = constant;
  for (const auto& [v, k] : coef) {
    auto it = a.find(v);
    if (it != a.end()) s += k * it->second;
  }
  switch (rel) {
    case Rel::Le: return s <= Rational(0);
    case Rel::Lt: return s < Rational(0);
    default: return s.is_zero();
  }
}

std::string LinearConstraint::str() const {
  std::string out;
  for (const auto& [v, k] : coef) {
    if (!out.empty()) out += " + ";
    out += k.str() + "*x" + std::to_string(v);
  }
  if (out.empty()) out = "0";
  out += " + " + constant.str();
  out += rel == Rel::Le ? " <= 0" : rel == Rel::Lt ? " < 0" : " = 0";
  return out;
}

LinExpr LinExpr::var(unsigned v) {
  LinExpr e;
  e.coef[v] = Rational(1);
  return e;
}

LinExpr LinExpr::value(const Rational& q) {
  LinExpr e;
  e.constant = q;
  return e;
}

namespace {

void add_into(std::map<unsigned, Rational>& dst, const std::map<unsigned, Rational>& src, const Rational& k) {
  for (const auto& [v, c] : src) {
    Rational& slot = dst[v];
    slot += c * k;
    if (slot.is_zero()) dst.erase(v);
  }
}

}  // namespace

LinExpr LinExpr::operator+(const LinExpr& o) const {
  LinExpr e = *this;
  add_into(e.coef, o.coef, Rational(1));
  e.constant += o.constant;
  return e;
}

LinExpr LinExpr::operator-(const LinExpr& o) const {
  LinExpr e = *this;
  add_into(e.coef, o.coef, Rational(-1));
  e.constant -= o.constant;
  return e;
}

LinExpr LinExpr::scaled(const Rational& k) const {
  LinExpr e;
  if (k.is_zero()) return e;
  for (const auto& [v, c] : coef) e.coef[v] = c * k;
  e.constant = constant * k;
  return e;
}

LinearConstraint make_constraint(const LinExpr& e, Rel rel) { return {e.coef, e.constant, rel}; }

// ---------------------------------------------------------------------------

namespace {

// Keeps only the tightest inequality per direction; equal constraints
// collapse.
class ConstraintStore {
public:
  // Returns false if a ground constraint is violated.
  bool add(LinearConstraint c) {
    if (c.ground()) return c.holds_ground();
    Rational lead = c.coef.begin()->second;
    if (lead.is_negative()) lead = -lead;
    if (c.rel == Rel::Eq) lead = c.coef.begin()->second;
    Rational inv = Rational(1) / lead;
    for (auto& [v, k] : c.coef) k *= inv;
    c.constant *= inv;
    Key key{c.coef, c.rel == Rel::Eq};
    auto it = best_.find(key);
    if (it == best_.end()) {
      best_.emplace(std::move(key), std::move(c));
      return true;
    }
    LinearConstraint& old = it->second;
    if (c.rel == Rel::Eq) {
      return old.constant == c.constant;  // parallel equalities must coincide
    }
    if (c.constant > old.constant || (c.constant == old.constant && c.rel == Rel::Lt)) old = std::move(c);
    return true;
  }

  std::vector<LinearConstraint> take() {
    std::vector<LinearConstraint> out;
    out.reserve(best_.size());
    for (auto& [k, c] : best_) out.push_back(std::move(c));
    best_.clear();
    return out;
  }

private:
  struct Key {
    std::map<unsigned, Rational> coef;
    bool eq;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.eq != b.eq) return a.eq < b.eq;
      return a.coef < b.coef;
    }
  };
  std::map<Key, LinearConstraint> best_;
};

LinearConstraint substitute_var(const LinearConstraint& c, unsigned v, const LinExpr& e) {
  auto it = c.coef.find(v);
  if (it == c.coef.end()) return c;
  Rational k = it->second;
  LinearConstraint out = c;
  out.coef.erase(v);
  add_into(out.coef, e.coef, k);
  out.constant += e.constant * k;
  return out;
}

Rational eval_expr(const LinExpr& e, const Assignment& a) {
  Rational s = e.constant;
  for (const auto& [v, k] : e.coef) {
    auto it = a.find(v);
    if (it != a.end()) s += k * it->second;
  }
  return s;
}

}  // namespace

std::optional<Assignment> fourier_motzkin(const std::vector<LinearConstraint>& input) {
  std::set<unsigned> all_vars;
  std::vector<LinearConstraint> cs;
  for (const auto& c : input) {
    for (const auto& entry : c.coef) all_vars.insert(entry.first);
    if (c.ground()) {
      if (!c.holds_ground()) return std::nullopt;
    } else {
      cs.push_back(c);
    }
  }

  // Equalities: solve for one variable and substitute everywhere.
  std::vector<std::pair<unsigned, LinExpr>> defs;
  while (true) {
    auto eq = std::find_if(cs.begin(), cs.end(), [](const LinearConstraint& c) { return c.rel == Rel::Eq; });
    if (eq == cs.end()) break;
    LinearConstraint e = *eq;
    cs.erase(eq);
    auto [v, a] = *e.coef.begin();
    LinExpr expr;
    for (const auto& [w, k] : e.coef) {
      if (w != v) expr.coef[w] = -k / a;
    }
    expr.constant = -e.constant / a;
    std::vector<LinearConstraint> next;
    for (const auto& c : cs) {
      LinearConstraint s = substitute_var(c, v, expr);
      if (s.ground()) {
        if (!s.holds_ground()) return std::nullopt;
      } else {
        next.push_back(std::move(s));
      }
    }
    cs = std::move(next);
    defs.emplace_back(v, std::move(expr));
  }

  ConstraintStore store;
  for (auto& c : cs) store.add(std::move(c));
  cs = store.take();

  // Inequalities: eliminate variables one by one, keeping each level for
  // back-substitution.
  std::vector<std::pair<unsigned, std::vector<LinearConstraint>>> levels;
  while (!cs.empty()) {
    std::map<unsigned, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& c : cs) {
      for (const auto& [v, k] : c.coef) {
        if (k.is_negative())
          ++counts[v].second;
        else
          ++counts[v].first;
      }
    }
    unsigned pick = counts.begin()->first;
    std::size_t best = SIZE_MAX;
    for (const auto& [v, pn] : counts) {
      std::size_t cost = pn.first * pn.second;
      if (cost < best) {
        best = cost;
        pick = v;
      }
    }
    std::vector<LinearConstraint> pos, neg, rest;
    for (auto& c : cs) {
      auto it = c.coef.find(pick);
      if (it == c.coef.end())
        rest.push_back(std::move(c));
      else if (it->second.is_negative())
        neg.push_back(std::move(c));
      else
        pos.push_back(std::move(c));
    }
    ConstraintStore next;
    for (auto& c : rest) next.add(std::move(c));
    for (const auto& p : pos) {
      Rational kp = Rational(1) / p.coef.at(pick);
      for (const auto& n : neg) {
        Rational kn = Rational(1) / -n.coef.at(pick);
        LinearConstraint comb;
        comb.coef = p.coef;
        for (auto& [v, k] : comb.coef) k *= kp;
        add_into(comb.coef, n.coef, kn);
        comb.coef.erase(pick);
        comb.constant = p.constant * kp + n.constant * kn;
        comb.rel = (p.rel == Rel::Lt || n.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
        if (!next.add(std::move(comb))) return std::nullopt;
      }
    }
    std::vector<LinearConstraint> touching = std::move(pos);
    touching.insert(touching.end(), std::make_move_iterator(neg.begin()), std::make_move_iterator(neg.end()));
    levels.emplace_back(pick, std::move(touching));
    cs = next.take();
  }

  Assignment a;
  for (auto lv = levels.rbegin(); lv != levels.rend(); ++lv) {
    const unsigned v = lv->first;
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& c : lv->second) {
      const Rational& k = c.coef.at(v);
      Rational rest = c.constant;
      for (const auto& [w, kw] : c.coef) {
        if (w != v) rest += kw * a.try_emplace(w, Rational(0)).first->second;  // vanished variables are free
      }
      Rational bound = -rest / k;
      bool strict = c.rel == Rel::Lt;
      if (k.is_negative()) {
        if (!lo || bound > *lo || (bound == *lo && strict)) {
          lo = bound;
          lo_strict = strict;
        }
      } else {
        if (!hi || bound < *hi || (bound == *hi && strict)) {
          hi = bound;
          hi_strict = strict;
        }
      }
    }
    Rational x(0);
    if (lo && !lo_strict)
      x = *lo;
    else if (hi && !hi_strict)
      x = *hi;
    else if (lo && hi)
      x = (*lo + *hi) / Rational(2);
    else if (lo)
      x = *lo + Rational(1);
    else if (hi)
      x = *hi - Rational(1);
    a[v] = x;
  }
  for (unsigned v : all_vars) a.emplace(v, Rational(0));
  for (auto d = defs.rbegin(); d != defs.rend(); ++d) a[d->first] = eval_expr(d->second, a);
  return a;
}

// ---------------------------------------------------------------------------

namespace {

struct Node {
  Op op;
  Formula f;
  int lhs = -1, rhs = -1;  // indices of binary children, -1 for leaves
};

class CaseSplitter {
public:
  CaseSplitter(const Quasiequation& q, const LukOptions& opts) : q_(q), opts_(opts) {
    for (const auto& e : q.premises) {
      index(e.lhs);
      index(e.rhs);
    }
    index(q.conclusion.lhs);
    index(q.conclusion.rhs);
    stats_.guards = nodes_.size();
    values_.resize(nodes_.size());
    ready_.assign(nodes_.size() + 1, {});
    for (std::size_t i = 0; i < q.premises.size(); ++i) {
      int at = std::max(position(q.premises[i].lhs), position(q.premises[i].rhs));
      ready_[static_cast<std::size_t>(at + 1)].push_back(i);
    }
    for (unsigned v : variables_of(q)) {
      base_.push_back(make_constraint(LinExpr::var(v).scaled(Rational(-1)), Rel::Le));
      base_.push_back(make_constraint(LinExpr::var(v) - LinExpr::value(Rational(1)), Rel::Le));
    }
  }

  std::optional<Assignment> run() {
    std::vector<LinearConstraint> cs = base_;
    for (std::size_t p : ready_[0]) cs.push_back(premise(p));
    if (opts_.prune && !feasible(cs)) return std::nullopt;
    return dfs(0, cs);
  }

  const LukStats& stats() const { return stats_; }

private:
  int index(const Formula& f) {
    if (!f.is_binary()) return -1;
    if (auto it = pos_.find(f); it != pos_.end()) return static_cast<int>(it->second);
    int l = index(f.lhs());
    int r = index(f.rhs());
    nodes_.push_back({f.op(), f, l, r});
    pos_.emplace(f, nodes_.size() - 1);
    return static_cast<int>(nodes_.size() - 1);
  }

  int position(const Formula& f) const {
    if (!f.is_binary()) return -1;
    return static_cast<int>(pos_.at(f));
  }

  LinExpr value(const Formula& f) const {
    switch (f.op()) {
      case Op::Var: return LinExpr::var(f.var_index());
      case Op::Const: return LinExpr::value(f.value());
      case Op::Zero: return LinExpr::value(Rational(0));
      case Op::One: return LinExpr::value(Rational(1));
      default: return values_[pos_.at(f)];
    }
  }

  LinearConstraint premise(std::size_t i) const {
    return make_constraint(value(q_.premises[i].lhs) - value(q_.premises[i].rhs), Rel::Eq);
  }

  bool feasible(const std::vector<LinearConstraint>& cs) {
    ++stats_.fm_calls;
    return fourier_motzkin(cs).has_value();
  }

  std::optional<Assignment> dfs(std::size_t i, std::vector<LinearConstraint>& cs) {
    if (i == nodes_.size()) {
      ++stats_.leaves;
      return conclude(cs);
    }
    const Node& n = nodes_[i];
    LinExpr a = value(n.f.lhs()), b = value(n.f.rhs());
    LinExpr one = LinExpr::value(Rational(1));
    LinExpr guard = n.op == Op::Fuse ? a + b - one : a - b;
    // outcome[0]: guard <= 0, outcome[1]: guard > 0
    LinExpr outcome[2];
    switch (n.op) {
      case Op::Fuse: outcome[0] = LinExpr::value(Rational(0)); outcome[1] = guard; break;
      case Op::Imp: outcome[0] = one; outcome[1] = one - guard; break;
      case Op::And: outcome[0] = a; outcome[1] = b; break;
      default: outcome[0] = b; outcome[1] = a; break;
    }
    int forced = -1;
    if (guard.ground()) forced = guard.constant <= Rational(0) ? 0 : 1;
    for (int branch = 0; branch < 2; ++branch) {
      if (forced >= 0 && branch != forced) continue;
      std::size_t mark = cs.size();
      if (forced < 0) {
        cs.push_back(branch == 0 ? make_constraint(guard, Rel::Le)
                                 : make_constraint(guard.scaled(Rational(-1)), Rel::Lt));
      }
      values_[i] = outcome[branch];
      for (std::size_t p : ready_[i + 1]) cs.push_back(premise(p));
      bool go = !opts_.prune || cs.size() == mark || feasible(cs);
      if (go) {
        if (auto found = dfs(i + 1, cs)) return found;
      }
      cs.resize(mark);
    }
    return std::nullopt;
  }

  std::optional<Assignment> conclude(std::vector<LinearConstraint>& cs) {
    LinExpr d = value(q_.conclusion.lhs) - value(q_.conclusion.rhs);
    if (d.ground() && d.constant.is_zero()) return std::nullopt;
    for (int side = 0; side < 2; ++side) {
      LinExpr e = side == 0 ? d : d.scaled(Rational(-1));
      cs.push_back(make_constraint(e, Rel::Lt));
      ++stats_.fm_calls;
      auto sample = fourier_motzkin(cs);
      cs.pop_back();
      if (sample) return sample;
    }
    return std::nullopt;
  }

  const Quasiequation& q_;
  LukOptions opts_;
  LukStats stats_;
  std::vector<Node> nodes_;
  std::map<Formula, std::size_t> pos_;
  std::vector<LinExpr> values_;
  std::vector<std::vector<std::size_t>> ready_;  // premises usable after node i-1
  std::vector<LinearConstraint> base_;
};

bool luk_holds(const Quasiequation& q, const Assignment& a) {
  for (const auto& e : q.premises) {
    if (eval_luk_rational(e.lhs, a) != eval_luk_rational(e.rhs, a)) return true;
  }
  return eval_luk_rational(q.conclusion.lhs, a) == eval_luk_rational(q.conclusion.rhs, a);
}

}  // namespace

LukVerdict luk_quasieq(const Quasiequation& q, const LukOptions& opts) {
  CaseSplitter splitter(q, opts);
  auto found = splitter.run();
  if (!found) return LukVerdict::yes({splitter.stats()});
  Assignment a;
  for (unsigned v : variables_of(q)) {
    auto it = found->find(v);
    a[v] = it == found->end() ? Rational(0) : it->second;
  }
  if (luk_holds(q, a)) throw std::logic_error("Łukasiewicz countermodel failed re-evaluation");
  return LukVerdict::no({std::move(a), splitter.stats()});
}

LukVerdict luk_consequence(const Rule& rule, const LukOptions& opts) {
  return luk_quasieq(rule_to_quasiequation(rule), opts);
}

LukVerdict luk_admissible(const Rule& rule, const LukOptions& opts) { return luk_consequence(rule, opts); }

// ---------------------------------------------------------------------------

Formula oplus_power(const Formula& a, unsigned n) {
  if (n == 0) throw InputError("empty ⊕-sum");
  Formula acc = a;
  for (unsigned i = 1; i < n; ++i) acc = oplus(acc, a);
  return acc;
}

ImplicitDefinition implicit_definition(const Rational& r, unsigned first_fresh) {
  if (r <= Rational(0) || r >= Rational(1)) throw InputError("implicit definition needs r in (0,1), got " + r.str());
  const unsigned m = static_cast<unsigned>(r.num().get_ui());
  const unsigned n = static_cast<unsigned>(r.den().get_ui());
  ImplicitDefinition d;
  d.defined = first_fresh;
  unsigned u = first_fresh + 1;
  d.aux.push_back(u);
  Formula U = Formula::var(u);
  d.equations.push_back({oplus_power(U, n - 1), neg(U)});
  d.equations.push_back({Formula::var(d.defined), oplus_power(U, m)});
  return d;
}

namespace {

Formula replace_constants(const Formula& f, const std::map<Rational, unsigned>& vars) {
  switch (f.op()) {
    case Op::Const: return Formula::var(vars.at(f.value()));
    case Op::Var:
    case Op::Zero:
    case Op::One: return f;
    case Op::And: return Formula::meet(replace_constants(f.lhs(), vars), replace_constants(f.rhs(), vars));
    case Op::Or: return Formula::join(replace_constants(f.lhs(), vars), replace_constants(f.rhs(), vars));
    case Op::Fuse: return Formula::fuse(replace_constants(f.lhs(), vars), replace_constants(f.rhs(), vars));
    case Op::Imp: return Formula::imp(replace_constants(f.lhs(), vars), replace_constants(f.rhs(), vars));
  }
  return f;
}

}  // namespace

ConstantFree eliminate_constants(const Quasiequation& q) {
  ConstantFree out;
  auto consts = constants_of(q);
  if (consts.empty()) {
    out.quasi = q;
    return out;
  }
  auto vars = variables_of(q);
  unsigned next = vars.empty() ? 1 : *vars.rbegin() + 1;
  std::vector<Equation> defining;
  for (const auto& r : consts) {
    ImplicitDefinition d = implicit_definition(r, next);
    next = d.aux.back() + 1;
    out.provenance[r] = d.defined;
    defining.insert(defining.end(), d.equations.begin(), d.equations.end());
  }
  auto rewrite = [&](const Equation& e) {
    return Equation{replace_constants(e.lhs, out.provenance), replace_constants(e.rhs, out.provenance)};
  };
  out.quasi.premises = defining;
  for (const auto& e : q.premises) out.quasi.premises.push_back(rewrite(e));
  out.quasi.conclusion = rewrite(q.conclusion);
  return out;
}

std::optional<FiniteRefutation> finite_chain_refute(const Quasiequation& q, unsigned n_max) {
  if (!constants_of(q).empty()) throw InputError("finite_chain_refute needs a constant-free quasiequation");
  auto vs = variables_of(q);
  std::vector<unsigned> vars(vs.begin(), vs.end());
  for (unsigned n = 1; n <= n_max; ++n) {
    std::vector<unsigned> idx(vars.size(), 0);
    while (true) {
      std::map<unsigned, unsigned> a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = idx[i];
      bool premises = true;
      for (const auto& e : q.premises) {
        if (eval_finite_mv(e.lhs, n, a) != eval_finite_mv(e.rhs, n, a)) {
          premises = false;
          break;
        }
      }
      if (premises && eval_finite_mv(q.conclusion.lhs, n, a) != eval_finite_mv(q.conclusion.rhs, n, a))
        return FiniteRefutation{n, a};
      std::size_t pos = vars.size();
      while (pos > 0 && idx[pos - 1] == n) idx[--pos] = 0;
      if (pos == 0) break;
      ++idx[pos - 1];
    }
  }
  return std::nullopt;
}

}  // namespace ratlog
