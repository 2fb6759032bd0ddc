#include "ratlog/chains.hpp"

#include <algorithm>

namespace ratlog {

namespace {

template <class V, class Map>
const V& lookup(const Map& a, unsigned index) {
  auto it = a.find(index);
  if (it == a.end()) throw InputError("unassigned variable x" + std::to_string(index));
  return it->second;
}

}  // namespace

Rational eval_luk_rational(const Formula& f, const Assignment& a) {
  switch (f.op()) {
    case Op::Var: return lookup<Rational>(a, f.var_index());
    case Op::Const: return f.value();
    case Op::Zero: return Rational(0);
    case Op::One: return Rational(1);
    default: break;
  }
  Rational x = eval_luk_rational(f.lhs(), a);
  Rational y = eval_luk_rational(f.rhs(), a);
  switch (f.op()) {
    case Op::And: return min(x, y);
    case Op::Or: return max(x, y);
    case Op::Fuse: return standard_fuse(Flavor::Luk, x, y);
    default: return standard_imp(Flavor::Luk, x, y);
  }
}

Rational eval_product_rational(const Formula& f, const Assignment& a) {
  switch (f.op()) {
    case Op::Var: return lookup<Rational>(a, f.var_index());
    case Op::Const: return f.value();
    case Op::Zero: return Rational(0);
    case Op::One: return Rational(1);
    default: break;
  }
  Rational x = eval_product_rational(f.lhs(), a);
  Rational y = eval_product_rational(f.rhs(), a);
  switch (f.op()) {
    case Op::And: return min(x, y);
    case Op::Or: return max(x, y);
    case Op::Fuse: return x * y;
    default: return standard_imp(Flavor::Prod, x, y);
  }
}

unsigned eval_finite_mv(const Formula& f, unsigned n, const std::map<unsigned, unsigned>& a) {
  switch (f.op()) {
    case Op::Var: {
      unsigned k = lookup<unsigned>(a, f.var_index());
      if (k > n) throw InputError("grid index out of range for x" + std::to_string(f.var_index()));
      return k;
    }
    case Op::Const: throw InputError("finite MV chains do not interpret the constant " + f.value().str());
    case Op::Zero: return 0;
    case Op::One: return n;
    default: break;
  }
  long x = eval_finite_mv(f.lhs(), n, a);
  long y = eval_finite_mv(f.rhs(), n, a);
  long N = n;
  switch (f.op()) {
    case Op::And: return static_cast<unsigned>(std::min(x, y));
    case Op::Or: return static_cast<unsigned>(std::max(x, y));
    case Op::Fuse: return static_cast<unsigned>(std::max(0L, x + y - N));
    default: return static_cast<unsigned>(std::min(N, N - x + y));
  }
}

// ---------------------------------------------------------------------------

GodelChainSpec GodelChainSpec::qr(const Rational& r) {
  if (r <= Rational(0) || r > Rational(1)) throw InputError("Qr needs r in (0,1], got " + r.str());
  return {Kind::Qr, r, Ordinal{}};
}

GodelChainSpec GodelChainSpec::qp(const Rational& p, Ordinal gamma) {
  if (p.is_negative() || p >= Rational(1)) throw InputError("Qp needs p in [0,1), got " + p.str());
  return {Kind::Qp, p, gamma};
}

std::string GodelChainSpec::str() const {
  if (kind == Kind::Qr) return "Qr " + param.str();
  return "Qp " + param.str() + " gamma=" + gamma.str();
}

std::string GodelValue::str() const {
  switch (kind) {
    case Kind::Rat: return "rat " + q.str();
    case Kind::Tail: return "tail " + std::to_string(tail);
    default: return "top";
  }
}

std::strong_ordering operator<=>(const GodelValue& a, const GodelValue& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  switch (a.kind) {
    case GodelValue::Kind::Rat: return a.q <=> b.q;
    case GodelValue::Kind::Tail: return a.tail <=> b.tail;
    default: return std::strong_ordering::equal;
  }
}

bool godel_member(const GodelValue& v, const GodelChainSpec& chain) {
  switch (v.kind) {
    case GodelValue::Kind::Top: return true;
    case GodelValue::Kind::Tail: return chain.kind == GodelChainSpec::Kind::Qp && chain.gamma.exceeds(v.tail);
    case GodelValue::Kind::Rat:
      if (v.q.is_negative()) return false;
      return chain.kind == GodelChainSpec::Kind::Qr ? v.q < chain.param : v.q <= chain.param;
  }
  return false;
}

GodelValue godel_constant(const Rational& q, const GodelChainSpec& chain) {
  GodelValue v = GodelValue::rat(q);
  return godel_member(v, chain) ? v : GodelValue::top();
}

GodelValue eval_godel(const Formula& f, const GodelChainSpec& chain, const GodelAssignment& a) {
  switch (f.op()) {
    case Op::Var: {
      const GodelValue& v = lookup<GodelValue>(a, f.var_index());
      if (!godel_member(v, chain))
        throw InputError("value " + v.str() + " of x" + std::to_string(f.var_index()) + " is not in " + chain.str());
      return v;
    }
    case Op::Const: return godel_constant(f.value(), chain);
    case Op::Zero: return GodelValue::rat(Rational(0));
    case Op::One: return GodelValue::top();
    default: break;
  }
  GodelValue x = eval_godel(f.lhs(), chain, a);
  GodelValue y = eval_godel(f.rhs(), chain, a);
  switch (f.op()) {
    case Op::And:
    case Op::Fuse: return std::min(x, y);
    case Op::Or: return std::max(x, y);
    default: return x <= y ? GodelValue::top() : y;
  }
}

// ---------------------------------------------------------------------------

SqrtRational::SqrtRational(const Rational& r) : coef_(r) {
  if (r.is_negative()) throw std::domain_error("SqrtRational holds non-negative values only");
}

SqrtRational SqrtRational::inv_sqrt(const Integer& p) {
  if (!is_prime(p)) throw InputError(p.get_str() + " is not a prime");
  SqrtRational s;
  s.coef_ = Rational(Integer(1), p);
  s.primes_[p] = 1;
  return s;
}

Integer SqrtRational::radicand() const {
  Integer m = 1;
  for (const auto& entry : primes_) m *= entry.first;
  return m;
}

Rational SqrtRational::square() const { return coef_ * coef_ * Rational(radicand(), Integer(1)); }

std::string SqrtRational::str() const {
  if (primes_.empty()) return coef_.str();
  std::string out = coef_.is_one() ? "" : coef_.str() + "*";
  return out + "sqrt(" + radicand().get_str() + ")";
}

SqrtRational operator*(const SqrtRational& a, const SqrtRational& b) {
  SqrtRational out;
  out.coef_ = a.coef_ * b.coef_;
  if (out.coef_.is_zero()) return out;
  out.primes_ = a.primes_;
  for (const auto& entry : b.primes_) {
    auto it = out.primes_.find(entry.first);
    if (it == out.primes_.end()) {
      out.primes_.emplace(entry.first, 1);
    } else {
      out.coef_ *= Rational(entry.first, Integer(1));
      out.primes_.erase(it);
    }
  }
  return out;
}

SqrtRational operator/(const SqrtRational& a, const SqrtRational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  // 1/(c*sqrt(m)) = sqrt(m)/(c*m)
  SqrtRational inv;
  inv.coef_ = Rational(1) / (b.coef_ * Rational(b.radicand(), Integer(1)));
  inv.primes_ = b.primes_;
  return a * inv;
}

AXElement inv_X(const std::set<Integer>& X) {
  AXElement out;
  for (const auto& p : X) out.push_back(SqrtRational::inv_sqrt(p));
  return out;
}

namespace {

SqrtRational ax_imp(const SqrtRational& x, const SqrtRational& y) {
  if (x <= y) return SqrtRational(Rational(1));
  return y / x;
}

}  // namespace

AXElement eval_in_AX(const Formula& f, const std::set<Integer>& X, const std::map<unsigned, AXElement>& a) {
  if (X.empty()) throw InputError("A_X needs a non-empty set of primes");
  const std::size_t k = X.size();
  switch (f.op()) {
    case Op::Var: {
      const AXElement& v = lookup<AXElement>(a, f.var_index());
      if (v.size() != k) throw InputError("assignment to x" + std::to_string(f.var_index()) + " has the wrong arity");
      for (const auto& c : v) {
        if (c.square() > Rational(1)) throw InputError("component " + c.str() + " lies outside [0,1]");
      }
      return v;
    }
    case Op::Const: return AXElement(k, SqrtRational(f.value()));
    case Op::Zero: return AXElement(k, SqrtRational(Rational(0)));
    case Op::One: return AXElement(k, SqrtRational(Rational(1)));
    default: break;
  }
  AXElement x = eval_in_AX(f.lhs(), X, a);
  AXElement y = eval_in_AX(f.rhs(), X, a);
  AXElement out(k);
  for (std::size_t i = 0; i < k; ++i) {
    switch (f.op()) {
      case Op::And: out[i] = std::min(x[i], y[i]); break;
      case Op::Or: out[i] = std::max(x[i], y[i]); break;
      case Op::Fuse: out[i] = x[i] * y[i]; break;
      default: out[i] = ax_imp(x[i], y[i]); break;
    }
  }
  return out;
}

Formula gamma_formula(const std::set<Integer>& X, unsigned z) {
  std::vector<Formula> parts;
  for (const auto& p : X) {
    parts.push_back(equiv(power(Formula::var(z), 2), Formula::constant(Rational(Integer(1), p))));
  }
  return join_all(parts);
}

std::pair<Formula, std::vector<Formula>> delta_formula(const std::set<Integer>& X, unsigned z) {
  std::vector<Formula> smaller;
  for (const auto& p : X) {
    std::set<Integer> rest = X;
    rest.erase(p);
    smaller.push_back(gamma_formula(rest, z));
  }
  return {gamma_formula(X, z), std::move(smaller)};
}

// ---------------------------------------------------------------------------

Rational standard_fuse(Flavor fl, const Rational& x, const Rational& y) {
  switch (fl) {
    case Flavor::Luk: return max(Rational(0), x + y - Rational(1));
    case Flavor::Prod: return x * y;
    default: return min(x, y);
  }
}

Rational standard_imp(Flavor fl, const Rational& x, const Rational& y) {
  if (x <= y) return Rational(1);
  switch (fl) {
    case Flavor::Luk: return Rational(1) - x + y;
    case Flavor::Prod: return y / x;
    default: return y;
  }
}

std::size_t InterpretationTable::index_of(const std::string& name) const {
  auto it = std::find(carrier.begin(), carrier.end(), name);
  if (it == carrier.end()) throw InputError("'" + name + "' is not in the carrier");
  return static_cast<std::size_t>(it - carrier.begin());
}

void InterpretationTable::validate() const {
  const std::size_t n = carrier.size();
  if (n == 0) throw InputError("empty carrier");
  auto square = [&](const std::vector<std::vector<std::size_t>>& t, const char* what) {
    if (t.size() != n) throw InputError(std::string(what) + " table has the wrong number of rows");
    for (const auto& row : t) {
      if (row.size() != n) throw InputError(std::string(what) + " table has a row of the wrong length");
      for (auto v : row) {
        if (v >= n) throw InputError(std::string(what) + " table refers outside the carrier");
      }
    }
  };
  square(fuse, "fuse");
  square(imp, "imp");
  if (zero >= n || one >= n) throw InputError("designated element outside the carrier");
  for (const auto& [q, idx] : constants) {
    if (idx >= n) throw InputError("constant " + q.str() + " refers outside the carrier");
  }
}

InterpretationTable InterpretationTable::from_json(const nlohmann::json& j) {
  InterpretationTable t;
  try {
    for (const auto& name : j.at("carrier")) t.carrier.push_back(name.get<std::string>());
    auto cell = [&](const nlohmann::json& c) -> std::size_t {
      if (c.is_number_unsigned()) return c.get<std::size_t>();
      return t.index_of(c.get<std::string>());
    };
    auto table = [&](const char* key) {
      std::vector<std::vector<std::size_t>> out;
      for (const auto& row : j.at(key)) {
        std::vector<std::size_t> r;
        for (const auto& c : row) r.push_back(cell(c));
        out.push_back(std::move(r));
      }
      return out;
    };
    t.fuse = table("fuse");
    t.imp = table("imp");
    t.zero = cell(j.at("zero"));
    t.one = cell(j.at("one"));
    if (j.contains("constants")) {
      for (const auto& [key, value] : j.at("constants").items()) {
        Rational q;
        try {
          q = Rational::parse(key);
        } catch (const std::invalid_argument&) {
          throw InputError("bad constant key '" + key + "'");
        }
        if (!q.in_unit_interval()) throw InputError("constant " + q.str() + " lies outside [0,1]");
        t.constants[q] = cell(value);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed table: ") + e.what());
  }
  t.validate();
  return t;
}

nlohmann::json InterpretationTable::to_json() const {
  nlohmann::json j;
  j["carrier"] = carrier;
  auto table = [&](const std::vector<std::vector<std::size_t>>& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t) {
      nlohmann::json r = nlohmann::json::array();
      for (auto v : row) r.push_back(carrier[v]);
      rows.push_back(std::move(r));
    }
    return rows;
  };
  j["fuse"] = table(fuse);
  j["imp"] = table(imp);
  j["zero"] = carrier[zero];
  j["one"] = carrier[one];
  nlohmann::json cs = nlohmann::json::object();
  for (const auto& [q, idx] : constants) cs[q.str()] = carrier[idx];
  j["constants"] = std::move(cs);
  return j;
}

std::vector<BookkeepingViolation> check_bookkeeping(const InterpretationTable& t, Flavor fl) {
  t.validate();
  std::vector<BookkeepingViolation> out;
  auto name = [&](std::size_t i) { return t.carrier[i]; };
  for (const auto& [p, cp] : t.constants) {
    for (const auto& [q, cq] : t.constants) {
      Rational pq = standard_fuse(fl, p, q);
      if (auto it = t.constants.find(pq); it != t.constants.end() && t.fuse[cp][cq] != it->second) {
        out.push_back({"fuse", p, q,
                       "c_" + p.str() + " * c_" + q.str() + " is " + name(t.fuse[cp][cq]) + ", expected c_" +
                           pq.str() + " = " + name(it->second)});
      }
      Rational pi = standard_imp(fl, p, q);
      if (auto it = t.constants.find(pi); it != t.constants.end() && t.imp[cp][cq] != it->second) {
        out.push_back({"imp", p, q,
                       "c_" + p.str() + " -> c_" + q.str() + " is " + name(t.imp[cp][cq]) + ", expected c_" +
                           pi.str() + " = " + name(it->second)});
      }
    }
  }
  if (auto it = t.constants.find(Rational(0)); it != t.constants.end() && it->second != t.zero)
    out.push_back({"zero", Rational(0), Rational(0), "c_0 is " + name(it->second) + ", not 0"});
  if (auto it = t.constants.find(Rational(1)); it != t.constants.end() && it->second != t.one)
    out.push_back({"one", Rational(1), Rational(1), "c_1 is " + name(it->second) + ", not 1"});
  return out;
}

InterpretationTable derived_table(Flavor fl, const std::vector<Rational>& carrier) {
  std::vector<Rational> elems = carrier;
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty() || elems.front() != Rational(0) || elems.back() != Rational(1))
    throw InputError("derived table needs a carrier inside [0,1] containing 0 and 1");
  InterpretationTable t;
  std::map<Rational, std::size_t> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    t.carrier.push_back(elems[i].str());
    pos[elems[i]] = i;
    t.constants[elems[i]] = i;
  }
  auto locate = [&](const Rational& v) {
    auto it = pos.find(v);
    return it == pos.end() ? std::size_t{0} : it->second;
  };
  const std::size_t n = elems.size();
  t.fuse.assign(n, std::vector<std::size_t>(n));
  t.imp.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      t.fuse[i][k] = locate(standard_fuse(fl, elems[i], elems[k]));
      t.imp[i][k] = locate(standard_imp(fl, elems[i], elems[k]));
    }
  }
  t.zero = 0;
  t.one = n - 1;
  return t;
}

InterpretationTable finite_mv_table(unsigned n) {
  if (n == 0) throw InputError("finite MV chain needs n >= 1");
  std::vector<Rational> grid;
  for (unsigned k = 0; k <= n; ++k) grid.emplace_back(Integer(k), Integer(n));
  return derived_table(Flavor::Luk, grid);
}

InterpretationTable trivialized_product_table(const std::vector<Rational>& constants) {
  InterpretationTable t = derived_table(Flavor::Prod, {Rational(0), Rational(1)});
  t.constants.clear();
  for (const auto& q : constants) {
    if (!q.in_unit_interval()) throw InputError("constant " + q.str() + " lies outside [0,1]");
    t.constants[q] = q.is_zero() ? t.zero : t.one;
  }
  return t;
}

}  // namespace ratlog
