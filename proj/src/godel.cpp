#include "ratlog/godel.hpp"

#include <algorithm>
#include <map>

namespace ratlog {

std::string GodelExtension::str() const {
  if (chain.kind == GodelChainSpec::Kind::Qr) return "RGr " + chain.param.str();
  return "RGp " + chain.param.str() + " gamma=" + chain.gamma.str();
}

namespace {

void collect_values(const Formula& f, std::set<Rational>& out) {
  switch (f.op()) {
    case Op::Var: return;
    case Op::Const: out.insert(f.value()); return;
    case Op::Zero: out.insert(Rational(0)); return;
    case Op::One: out.insert(Rational(1)); return;
    default:
      collect_values(f.lhs(), out);
      collect_values(f.rhs(), out);
  }
}

}  // namespace

std::set<Rational> mentioned_values(const Quasiequation& q) {
  std::set<Rational> out;
  for (const auto& e : q.premises) {
    collect_values(e.lhs, out);
    collect_values(e.rhs, out);
  }
  collect_values(q.conclusion.lhs, out);
  collect_values(q.conclusion.rhs, out);
  return out;
}

std::vector<DiagramRegion> diagram_regions(const std::set<Rational>& constants, const GodelChainSpec& chain,
                                           std::size_t variables) {
  using K = DiagramRegion::Kind;
  const bool qp = chain.kind == GodelChainSpec::Kind::Qp;
  const Rational& bound = chain.param;
  std::set<Rational> anchors;
  for (const auto& c : constants) {
    GodelValue v = godel_constant(c, chain);
    if (v.kind == GodelValue::Kind::Rat) anchors.insert(v.q);
  }
  if (qp && bound.is_zero()) anchors.insert(Rational(0));

  std::vector<DiagramRegion> out;
  auto gap = [&](const Rational& lo, const Rational& hi) {
    if (lo < hi) out.push_back({K::Gap, lo, hi, 0});
  };
  if (anchors.empty()) {
    gap(Rational(0), bound);
  } else {
    gap(Rational(0), *anchors.begin());
    for (auto it = anchors.begin(); it != anchors.end(); ++it) {
      out.push_back({K::Point, *it, *it, 0});
      auto next = std::next(it);
      gap(*it, next == anchors.end() ? bound : *next);
    }
  }
  if (qp) {
    unsigned cap = static_cast<unsigned>(variables);
    if (!chain.gamma.omega) cap = std::min(cap, chain.gamma.n);
    if (cap > 0) out.push_back({K::Tail, Rational(0), Rational(0), cap});
  }
  out.push_back({K::Top, Rational(0), Rational(0), 0});
  return out;
}

GodelAssignment OrderDiagram::realize(const std::vector<DiagramRegion>& regions) const {
  std::map<std::size_t, unsigned> blocks;  // region -> number of blocks used
  for (std::size_t i = 0; i < vars.size(); ++i) {
    unsigned& b = blocks[region[i]];
    b = std::max(b, block[i] + 1);
  }
  GodelAssignment a;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const DiagramRegion& r = regions[region[i]];
    switch (r.kind) {
      case DiagramRegion::Kind::Gap: {
        Rational t(Integer(block[i] + 1), Integer(blocks[region[i]] + 1));
        a[vars[i]] = GodelValue::rat(r.lo + (r.hi - r.lo) * t);
        break;
      }
      case DiagramRegion::Kind::Point: a[vars[i]] = GodelValue::rat(r.lo); break;
      case DiagramRegion::Kind::Tail: a[vars[i]] = GodelValue::tail_at(block[i]); break;
      case DiagramRegion::Kind::Top: a[vars[i]] = GodelValue::top(); break;
    }
  }
  return a;
}

namespace {

// Rank vectors over {0..m-1} whose image is an initial segment {0..j-1}
// with j <= cap; each encodes one ordered set partition. Lexicographic.
std::vector<std::vector<unsigned>> ordered_partitions(std::size_t m, unsigned cap) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> v(m, 0);
  while (true) {
    unsigned hi = 0;
    std::vector<bool> used(m, false);
    for (auto x : v) {
      used[x] = true;
      hi = std::max(hi, x + 1);
    }
    if (hi <= cap && std::all_of(used.begin(), used.begin() + hi, [](bool b) { return b; })) out.push_back(v);
    std::size_t pos = m;
    while (pos > 0 && v[pos - 1] + 1 == m) v[--pos] = 0;
    if (pos == 0) break;
    ++v[pos - 1];
  }
  return out;
}

}  // namespace

std::size_t enumerate_diagrams(const std::vector<unsigned>& vars, const std::vector<DiagramRegion>& regions,
                               const std::function<bool(const OrderDiagram&)>& visit) {
  const std::size_t k = vars.size();
  const std::size_t R = regions.size();
  std::size_t count = 0;
  OrderDiagram d;
  d.vars = vars;
  d.region.assign(k, 0);
  d.block.assign(k, 0);
  if (k == 0) {
    ++count;
    visit(d);
    return count;
  }
  std::map<std::pair<std::size_t, unsigned>, std::vector<std::vector<unsigned>>> partition_cache;
  while (true) {
    // Groups of variables sharing a gap or tail region.
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < k; ++i) {
      auto kind = regions[d.region[i]].kind;
      if (kind == DiagramRegion::Kind::Gap || kind == DiagramRegion::Kind::Tail) groups[d.region[i]].push_back(i);
      d.block[i] = 0;
    }
    std::vector<std::pair<const std::vector<std::size_t>*, const std::vector<std::vector<unsigned>>*>> plan;
    bool feasible = true;
    for (const auto& [r, members] : groups) {
      unsigned cap = regions[r].kind == DiagramRegion::Kind::Tail ? regions[r].capacity
                                                                  : static_cast<unsigned>(members.size());
      auto key = std::make_pair(members.size(), cap);
      auto it = partition_cache.find(key);
      if (it == partition_cache.end()) it = partition_cache.emplace(key, ordered_partitions(members.size(), cap)).first;
      if (it->second.empty()) feasible = false;
      plan.emplace_back(&members, &it->second);
    }
    if (feasible) {
      std::vector<std::size_t> choice(plan.size(), 0);
      while (true) {
        for (std::size_t g = 0; g < plan.size(); ++g) {
          const auto& members = *plan[g].first;
          const auto& ranks = (*plan[g].second)[choice[g]];
          for (std::size_t m = 0; m < members.size(); ++m) d.block[members[m]] = ranks[m];
        }
        ++count;
        if (!visit(d)) return count;
        std::size_t g = plan.size();
        while (g > 0 && choice[g - 1] + 1 == plan[g - 1].second->size()) choice[--g] = 0;
        if (g == 0) break;
        ++choice[g - 1];
      }
    }
    std::size_t pos = k;
    while (pos > 0 && d.region[pos - 1] + 1 == R) d.region[--pos] = 0;
    if (pos == 0) break;
    ++d.region[pos - 1];
  }
  return count;
}

bool godel_satisfies(const Quasiequation& q, const GodelChainSpec& chain, const GodelAssignment& a) {
  for (const auto& e : q.premises) {
    if (eval_godel(e.lhs, chain, a) != eval_godel(e.rhs, chain, a)) return true;
  }
  return eval_godel(q.conclusion.lhs, chain, a) == eval_godel(q.conclusion.rhs, chain, a);
}

GodelVerdict check_quasieq_in_chain(const Quasiequation& q, const GodelChainSpec& chain) {
  auto var_set = variables_of(q);
  std::vector<unsigned> vars(var_set.begin(), var_set.end());
  auto regions = diagram_regions(mentioned_values(q), chain, vars.size());
  std::optional<GodelAssignment> found;
  enumerate_diagrams(vars, regions, [&](const OrderDiagram& d) {
    GodelAssignment a = d.realize(regions);
    if (godel_satisfies(q, chain, a)) return true;
    found = std::move(a);
    return false;
  });
  if (!found) return GodelVerdict::yes({});
  for (const auto& [v, val] : *found) {
    if (!godel_member(val, chain)) throw std::logic_error("realised value " + val.str() + " outside " + chain.str());
  }
  if (godel_satisfies(q, chain, *found)) throw std::logic_error("countermodel failed re-evaluation");
  return GodelVerdict::no({chain, std::move(*found)});
}

GodelVerdict godel_admissible(const Rule& rule, const GodelExtension& ext) {
  return check_quasieq_in_chain(rule_to_quasiequation(rule), ext.chain);
}

std::vector<GodelChainSpec> representative_chains(const Rule& rule, const GodelExtension& ext) {
  Quasiequation q = rule_to_quasiequation(rule);
  std::set<Rational> mentioned = mentioned_values(q);
  mentioned.insert(Rational(0));
  mentioned.insert(Rational(1));
  std::vector<Rational> qs(mentioned.begin(), mentioned.end());
  const unsigned k = static_cast<unsigned>(variables_of(q).size());
  const Rational& bound = ext.chain.param;
  const bool rgp = ext.chain.kind == GodelChainSpec::Kind::Qp;

  std::vector<GodelChainSpec> out;
  for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
    if (qs[i] >= bound) break;
    Rational hi = min(qs[i + 1], bound);
    out.push_back(GodelChainSpec::qr((qs[i] + hi) / Rational(2)));
  }
  std::vector<Ordinal> gammas;
  for (unsigned g = 0; g <= k; ++g) gammas.push_back(Ordinal::finite(g));
  gammas.push_back(Ordinal::infinite());
  for (const auto& p : qs) {
    if (p >= Rational(1)) break;
    if (p < bound) {
      for (const auto& g : gammas) out.push_back(GodelChainSpec::qp(p, g));
    } else if (rgp && p == bound) {
      for (const auto& g : gammas) {
        if (g <= ext.chain.gamma) out.push_back(GodelChainSpec::qp(p, g));
      }
    }
  }
  return out;
}

GodelVerdict godel_derivable(const Rule& rule, const GodelExtension& ext) {
  Quasiequation q = rule_to_quasiequation(rule);
  for (const auto& chain : representative_chains(rule, ext)) {
    GodelVerdict v = check_quasieq_in_chain(q, chain);
    if (v.is_no()) return v;
  }
  return GodelVerdict::yes({});
}

bool variety_leq(const VarietyGen& a, const VarietyGen& b) {
  using K = GodelChainSpec::Kind;
  if (a.kind == K::Qr && b.kind == K::Qr) return a.param <= b.param;
  if (a.kind == K::Qr) return a.param <= b.param;
  if (b.kind == K::Qr) return a.param < b.param;
  return a.param < b.param || (a.param == b.param && a.gamma <= b.gamma);
}

Formula width_formula(const Rational& p, unsigned n) {
  Formula cp = Formula::constant(p);
  std::vector<Formula> parts;
  for (unsigned i = 0; i <= n + 2; ++i) {
    for (unsigned j = i + 1; j <= n + 2; ++j) {
      parts.push_back(equiv(Formula::join(cp, Formula::var(i + 1)), Formula::join(cp, Formula::var(j + 1))));
    }
  }
  return join_all(parts);
}

VarietyAxioms variety_axioms(const VarietyGen& g, const std::set<Rational>& mentioned) {
  VarietyAxioms ax;
  ax.from = g.param;
  ax.from_closed = g.kind == GodelChainSpec::Kind::Qr;
  for (const auto& q : mentioned) {
    if (!q.in_unit_interval()) continue;
    if (ax.from_closed ? q >= ax.from : q > ax.from) ax.instances.push_back(q);
  }
  if (g.kind == GodelChainSpec::Kind::Qp && !g.gamma.omega) ax.width = width_formula(g.param, g.gamma.n);
  return ax;
}

namespace {

ExtensionClass all_flags() {
  ExtensionClass c;
  c.sc = c.hsc = c.asc = c.psc = true;
  return c;
}

}  // namespace

ExtensionClass classify_chain_quasivariety(const GodelChainSpec&) { return all_flags(); }

ExtensionClass classify_extension(const GodelExtension& ext) {
  if (ext.chain.kind == GodelChainSpec::Kind::Qp && ext.chain.param.is_zero()) return all_flags();
  ExtensionClass c;
  Rational q = ext.chain.param / Rational(2);
  Rule witness{{Formula::join(Formula::constant(q), Formula::var(1))}, Formula::var(1)};
  GodelVerdict adm = godel_admissible(witness, ext);
  GodelVerdict der = godel_derivable(witness, ext);
  if (!adm.is_yes() || !der.is_no()) throw std::logic_error("separating rule for " + ext.str() + " did not separate");
  c.witness = witness;
  c.witness_countermodel = der.no_witness();
  return c;
}

}  // namespace ratlog
