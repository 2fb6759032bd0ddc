#include "ratlog/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ratlog/luk.hpp"

namespace ratlog::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(trim(part));
  return out;
}

Rational parse_rational(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(trim(text));
  } catch (const std::exception&) {
    throw InputError(what + ": '" + text + "' is not a rational m/n");
  }
}

unsigned parse_var(const std::string& name) {
  std::string t = trim(name);
  if (t.size() < 2 || t[0] != 'x' || t.find_first_not_of("0123456789", 1) != std::string::npos || t.size() > 10)
    throw InputError("bad variable name '" + name + "' (expected x<digits>)");
  return static_cast<unsigned>(std::stoul(t.substr(1)));
}

std::string var_name(unsigned v) { return "x" + std::to_string(v); }

Logic parse_logic(const std::string& s) {
  if (s == "RL") return Logic::RL;
  if (s == "RP") return Logic::RP;
  if (s == "RG") return Logic::RG;
  throw InputError("--logic must be RL, RP or RG");
}

Mode parse_mode(const std::string& s) {
  if (s == "admissible") return Mode::Admissible;
  if (s == "derivable") return Mode::Derivable;
  throw InputError("--mode must be admissible or derivable");
}

Flavor parse_flavor(const std::string& s) {
  if (s == "luk" || s == "L") return Flavor::Luk;
  if (s == "prod" || s == "P") return Flavor::Prod;
  if (s == "godel" || s == "G") return Flavor::Godel;
  throw InputError("--flavor must be luk, prod or godel");
}

std::size_t positive(long long v, const std::string& flag) {
  if (v <= 0) throw InputError(flag + " must be positive");
  return static_cast<std::size_t>(v);
}

json assignment_json(const Assignment& a) {
  json out = json::object();
  for (const auto& [v, x] : a) out[var_name(v)] = x.str();
  return out;
}

std::string godel_value_text(const GodelValue& v) {
  return v.kind == GodelValue::Kind::Rat ? v.q.str() : v.str();
}

json godel_assignment_json(const GodelAssignment& a) {
  json out = json::object();
  for (const auto& [v, x] : a) out[var_name(v)] = godel_value_text(x);
  return out;
}

GodelValue parse_godel_value(const std::string& text) {
  std::string t = trim(text);
  if (t == "top") return GodelValue::top();
  if (t.rfind("tail", 0) == 0) {
    std::string n = trim(t.substr(4));
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos || n.size() > 9)
      throw InputError("bad tail index in '" + text + "'");
    return GodelValue::tail_at(static_cast<unsigned>(std::stoul(n)));
  }
  return GodelValue::rat(parse_rational(t, "assignment value"));
}

json derivation_json(const Derivation& d) {
  json out = json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& s = d[k];
    json step{{"step", k}, {"formula", to_string(s.formula)}};
    using K = Justification::Kind;
    switch (s.why.kind) {
      case K::Premise: step["rule"] = "premise"; break;
      case K::Theorem:
        step["rule"] = "theorem";
        step["schema"] = s.why.schema;
        break;
      case K::ModusPonens:
        step["rule"] = "mp";
        step["from"] = {s.why.i, s.why.j};
        break;
      case K::BaseRuleCut:
        step["rule"] = "base_cut";
        step["from"] = {s.why.i};
        step["base"] = s.why.base.str();
        break;
      case K::Monotone:
        step["rule"] = "monotone";
        step["from"] = {s.why.i};
        break;
    }
    out.push_back(std::move(step));
  }
  return out;
}

json unknown_json(const Unknown& u) { return {{"exhausted", u.exhausted}, {"spent", u.spent}}; }

std::string status_for(Mode m, bool yes) {
  if (m == Mode::Admissible) return yes ? "admissible" : "not_admissible";
  return yes ? "derivable" : "not_derivable";
}

bool luk_satisfies(const Quasiequation& q, const Assignment& a) {
  for (const auto& e : q.premises)
    if (eval_luk_rational(e.lhs, a) != eval_luk_rational(e.rhs, a)) return true;
  return eval_luk_rational(q.conclusion.lhs, a) == eval_luk_rational(q.conclusion.rhs, a);
}

void revalidate(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error(what + " failed re-validation");
}

// One rule; returns the document and whether the verdict was Unknown.
std::pair<json, bool> check_one(const Check& c, const std::string& text) {
  Rule rule = parse_rule(text);
  Quasiequation q = rule_to_quasiequation(rule);
  json out{{"rule", to_string(rule)}};
  switch (c.logic) {
    case Logic::RL: {
      out["logic"] = "RL";
      // Admissibility and derivability coincide here.
      auto v = c.mode == Mode::Admissible ? luk_admissible(rule) : luk_consequence(rule);
      if (v.is_yes()) {
        const auto& s = v.yes_witness().stats;
        out["status"] = status_for(c.mode, true);
        out["certificate"] = {{"kind", "case_split"}, {"guards", s.guards}, {"leaves", s.leaves}, {"fm_calls", s.fm_calls}};
      } else {
        const auto& a = v.no_witness().assignment;
        revalidate(!luk_satisfies(q, a), "countermodel");
        out["status"] = status_for(c.mode, false);
        out["witness"] = {{"chain", "QLQ"}, {"assignment", assignment_json(a)}};
      }
      return {out, false};
    }
    case Logic::RG: {
      out["logic"] = "RG";
      GodelExtension ext = c.extension.value_or(GodelExtension::rg());
      out["extension"] = ext.str();
      auto v = c.mode == Mode::Admissible ? godel_admissible(rule, ext) : godel_derivable(rule, ext);
      if (v.is_yes()) {
        out["status"] = status_for(c.mode, true);
        out["certificate"] = {{"kind", "order_diagrams"}};
      } else {
        const auto& w = v.no_witness();
        revalidate(!godel_satisfies(q, w.chain, w.assignment), "countermodel");
        out["status"] = status_for(c.mode, false);
        out["witness"] = {{"chain", w.chain.str()}, {"assignment", godel_assignment_json(w.assignment)}};
      }
      return {out, false};
    }
    case Logic::RP: break;
  }
  out["logic"] = "RP";
  auto v = c.mode == Mode::Admissible ? product_admissible(rule, c.budget) : product_derivable_sound(rule, c.budget);
  if (v.is_unknown()) {
    out["status"] = "unknown";
    out["unknown"] = unknown_json(v.unknown_info());
    return {out, true};
  }
  out["status"] = status_for(c.mode, v.is_yes());
  if (v.is_yes()) {
    const auto& cert = v.yes_witness();
    if (cert.derivation) {
      revalidate(check_derivation(rule, *cert.derivation, c.mode == Mode::Admissible).empty(), "derivation");
      out["certificate"] = derivation_json(*cert.derivation);
    } else if (cert.vacuous) {
      revalidate(!eval_product_rational(rule.premises.at(cert.vacuous->premise), {}).is_one(), "vacuous premise");
      out["certificate"] = json::array(
          {{{"rule", "vacuous_premise"}, {"premise", cert.vacuous->premise}, {"value", cert.vacuous->value.str()}}});
    } else {
      revalidate(product_satisfies(q, ProductChain::Faithful, {}), "ground evaluation");
      out["certificate"] = json::array({{{"rule", "ground_evaluation"}}});
    }
  } else {
    const auto& w = v.no_witness();
    revalidate(!product_satisfies(q, w.chain, w.assignment), "countermodel");
    out["witness"] = {{"chain", to_string(w.chain)}, {"assignment", assignment_json(w.assignment)}};
  }
  return {out, false};
}

Output run_check(const Check& c) {
  if (c.rules.empty()) throw InputError("no rule given (use --rule or --rules-file)");
  if (c.extension && c.logic != Logic::RG) throw InputError("--ext only applies to --logic RG");
  if (!c.batch) {
    auto [doc, unknown] = check_one(c, c.rules.front());
    return {doc, unknown ? 2 : 0};
  }
  json results = json::array();
  int code = 0;
  for (const auto& text : c.rules) {
    try {
      auto [doc, unknown] = check_one(c, text);
      if (unknown && code == 0) code = 2;
      results.push_back(std::move(doc));
    } catch (const InputError& e) {
      results.push_back({{"rule", text}, {"status", "error"}, {"message", e.what()}});
      code = 1;
    }
  }
  return {{{"results", results}}, code};
}

Output run_eval(const Eval& e) {
  Formula f = parse_formula(e.formula);
  for (unsigned v : variables_of(f))
    if (!e.assignment.count(v)) throw InputError("no value for " + var_name(v));
  if (e.algebra == "G") {
    GodelChainSpec chain = e.chain.value_or(GodelChainSpec::qr(Rational(1)));
    GodelAssignment a;
    for (const auto& [v, text] : e.assignment) {
      GodelValue x = parse_godel_value(text);
      if (!godel_member(x, chain)) throw InputError(text + " is not an element of " + chain.str());
      a.emplace(v, x);
    }
    return {{{"algebra", chain.str()}, {"value", godel_value_text(eval_godel(f, chain, a))}}, 0};
  }
  Assignment a;
  for (const auto& [v, text] : e.assignment) {
    Rational x = parse_rational(text, "assignment value");
    if (!x.in_unit_interval()) throw InputError("value " + x.str() + " lies outside [0,1]");
    a.emplace(v, x);
  }
  if (e.algebra == "L") return {{{"algebra", "QLQ"}, {"value", eval_luk_rational(f, a).str()}}, 0};
  if (e.algebra == "P") return {{{"algebra", "QPiQ"}, {"value", eval_product_rational(f, a).str()}}, 0};
  if (e.algebra == "MV") {
    std::map<unsigned, unsigned> grid;
    Rational n(static_cast<long>(e.mv_n));
    for (const auto& [v, x] : a) {
      Rational k = x * n;
      if (k.den() != 1) throw InputError("value " + x.str() + " is not in the chain with " + std::to_string(e.mv_n + 1) + " elements");
      grid.emplace(v, static_cast<unsigned>(k.num().get_ui()));
    }
    unsigned k = eval_finite_mv(f, e.mv_n, grid);
    return {{{"algebra", "MV" + std::to_string(e.mv_n + 1)}, {"value", Rational(Integer(k), Integer(e.mv_n)).str()}}, 0};
  }
  throw InputError("--algebra must be L, P, G or MV");
}

Output run_gadget(const Gadget& g) {
  if (g.primes.empty()) throw InputError("--primes needs at least one prime");
  for (const auto& p : g.primes)
    if (!is_prime(p)) throw InputError(p.get_str() + " is not prime");
  const unsigned z = 1;
  auto [gamma, without] = delta_formula(g.primes, z);
  std::map<unsigned, AXElement> a{{z, inv_X(g.primes)}};
  auto is_top = [](const AXElement& e) {
    for (const auto& c : e)
      if (!(c == SqrtRational(Rational(1)))) return false;
    return true;
  };
  bool holds = is_top(eval_in_AX(gamma, g.primes, a));
  for (const auto& w : without) holds = holds && !is_top(eval_in_AX(w, g.primes, a));
  return {{{"delta_at_inv", holds ? "1" : "0"}}, 0};
}

json violations_json(const std::vector<BookkeepingViolation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back({{"axiom", v.axiom}, {"p", v.p.str()}, {"q", v.q.str()}, {"detail", v.detail}});
  return out;
}

}  // namespace

GodelChainSpec parse_ext(const std::string& text) {
  auto parts = split(text, ',');
  auto value = [&](const std::string& part, const std::string& key) -> std::optional<std::string> {
    if (part.rfind(key + "=", 0) != 0) return std::nullopt;
    return trim(part.substr(key.size() + 1));
  };
  if (parts.size() == 1) {
    if (auto r = value(parts[0], "r")) return GodelChainSpec::qr(parse_rational(*r, "--ext r"));
  }
  if (parts.size() == 2) {
    auto p = value(parts[0], "p");
    auto g = value(parts[1], "gamma");
    if (p && g) {
      Ordinal gamma;
      if (*g == "omega") {
        gamma = Ordinal::infinite();
      } else {
        if (g->empty() || g->find_first_not_of("0123456789") != std::string::npos || g->size() > 9)
          throw InputError("gamma must be a natural number or omega");
        gamma = Ordinal::finite(static_cast<unsigned>(std::stoul(*g)));
      }
      return GodelChainSpec::qp(parse_rational(*p, "--ext p"), gamma);
    }
  }
  throw InputError("--ext must look like r=m/n or p=m/n,gamma=k|omega");
}

Invocation parse_command(const std::vector<std::string>& args) {
  CLI::App app{"exact reasoning over rational Lukasiewicz, product and Godel logics", "ratlog"};
  app.require_subcommand(1);
  std::string json_out;
  app.add_option("--json-out", json_out, "also write the JSON result to this file");
  app.fallthrough();

  std::string logic, mode, ext, rule, rules_file;
  long long tuples = 100000, depth = 6, steps = 10000;
  auto* check = app.add_subcommand("check", "decide admissibility or derivability of a rule");
  check->add_option("--logic", logic, "RL, RP or RG")->required();
  check->add_option("--mode", mode, "admissible or derivable")->required();
  check->add_option("--ext", ext, "RG extension: r=m/n or p=m/n,gamma=k|omega");
  auto* rule_opt = check->add_option("--rule", rule, "rule text, e.g. \"x1, x2 |- x1 * x2\"");
  auto* file_opt = check->add_option("--rules-file", rules_file, "file with one rule per line");
  rule_opt->excludes(file_opt);
  check->add_option("--budget-tuples", tuples);
  check->add_option("--budget-depth", depth);
  check->add_option("--budget-steps", steps);

  std::string algebra = "P", formula, assign, eval_ext;
  unsigned mv_n = 1;
  auto* eval = app.add_subcommand("eval", "evaluate a formula in a chain");
  eval->add_option("--algebra", algebra, "L, P, G or MV");
  eval->add_option("--ext", eval_ext, "chain for G: r=m/n or p=m/n,gamma=k|omega");
  eval->add_option("--n", mv_n, "MV: the chain has n+1 elements");
  eval->add_option("--formula", formula)->required();
  eval->add_option("--assign", assign, "x1=1/2,x2=top,...");

  std::string g1, g2;
  auto* compare = app.add_subcommand("variety-compare", "compare the varieties of two Godel chains");
  compare->add_option("--g1", g1)->required();
  compare->add_option("--g2", g2)->required();

  std::string gen, mentioned;
  auto* axioms = app.add_subcommand("variety-axioms", "equational axioms of a Godel chain's variety");
  axioms->add_option("--ext", gen)->required();
  axioms->add_option("--mentioned", mentioned, "comma separated constants");

  std::string classify_ext;
  bool quasivariety = false;
  auto* classify = app.add_subcommand("classify", "structural completeness of an extension of RG");
  classify->add_option("--ext", classify_ext)->required();
  classify->add_flag("--quasivariety", quasivariety, "classify the quasivariety of the chain instead");

  std::string table, flavor = "prod";
  auto* check_table = app.add_subcommand("check-table", "check bookkeeping axioms of a finite table");
  check_table->add_option("--table", table)->required();
  check_table->add_option("--flavor", flavor, "luk, prod or godel");

  std::string primes;
  auto* gadget = app.add_subcommand("gadget", "evaluate the square-root gadget");
  gadget->add_option("--primes", primes)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream out;
    app.exit(e, out, out);
    throw HelpRequested{out.str()};
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }

  Invocation inv{Check{}, std::nullopt};
  if (!json_out.empty()) inv.json_out = json_out;

  if (check->parsed()) {
    Check c;
    c.logic = parse_logic(logic);
    c.mode = parse_mode(mode);
    if (!ext.empty()) c.extension = GodelExtension{parse_ext(ext)};
    c.budget = {positive(tuples, "--budget-tuples"), positive(depth, "--budget-depth"), positive(steps, "--budget-steps")};
    if (!rule.empty()) {
      c.rules.push_back(rule);
    } else if (!rules_file.empty()) {
      std::ifstream in(rules_file);
      if (!in) throw InputError("cannot read " + rules_file);
      for (std::string line; std::getline(in, line);)
        if (!trim(line).empty()) c.rules.push_back(trim(line));
      c.batch = true;
    }
    inv.command = c;
  } else if (eval->parsed()) {
    Eval e;
    e.algebra = algebra;
    e.formula = formula;
    e.mv_n = mv_n;
    if (e.algebra == "MV" && mv_n == 0) throw InputError("--n must be positive");
    if (!eval_ext.empty()) e.chain = parse_ext(eval_ext);
    if (!trim(assign).empty()) {
      for (const auto& item : split(assign, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--assign entries look like x1=1/2");
        e.assignment[parse_var(item.substr(0, eq))] = trim(item.substr(eq + 1));
      }
    }
    inv.command = e;
  } else if (compare->parsed()) {
    inv.command = VarietyCompare{parse_ext(g1), parse_ext(g2)};
  } else if (axioms->parsed()) {
    VarietyAxiomsCmd a{parse_ext(gen), {}};
    if (!trim(mentioned).empty())
      for (const auto& m : split(mentioned, ',')) a.mentioned.insert(parse_rational(m, "--mentioned"));
    inv.command = a;
  } else if (classify->parsed()) {
    inv.command = Classify{parse_ext(classify_ext), quasivariety};
  } else if (check_table->parsed()) {
    inv.command = CheckTable{table, parse_flavor(flavor)};
  } else {
    Gadget g;
    for (const auto& p : split(primes, ',')) {
      if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) throw InputError("bad prime '" + p + "'");
      g.primes.insert(Integer(p));
    }
    inv.command = g;
  }
  return inv;
}

Output run(const Command& cmd) {
  try {
    if (auto* c = std::get_if<Check>(&cmd)) return run_check(*c);
    if (auto* e = std::get_if<Eval>(&cmd)) return run_eval(*e);
    if (auto* v = std::get_if<VarietyCompare>(&cmd)) {
      bool le = variety_leq(v->g1, v->g2), ge = variety_leq(v->g2, v->g1);
      return {{{"g1", v->g1.str()}, {"g2", v->g2.str()}, {"leq", le}, {"geq", ge}, {"equal", le && ge}}, 0};
    }
    if (auto* a = std::get_if<VarietyAxiomsCmd>(&cmd)) {
      auto ax = variety_axioms(a->g, a->mentioned);
      json inst = json::array();
      for (const auto& q : ax.instances) inst.push_back(q.str());
      json out{{"generator", a->g.str()}, {"from", ax.from.str()}, {"from_closed", ax.from_closed}, {"instances", inst}};
      out["width"] = ax.width ? json(to_string(*ax.width)) : json(nullptr);
      return {out, 0};
    }
    if (auto* c = std::get_if<Classify>(&cmd)) {
      GodelExtension ext{c->chain};
      auto k = c->quasivariety ? classify_chain_quasivariety(c->chain) : classify_extension(ext);
      json out{{"extension", c->quasivariety ? "Q(" + c->chain.str() + ")" : ext.str()},
               {"sc", k.sc}, {"hsc", k.hsc}, {"asc", k.asc}, {"psc", k.psc}};
      if (k.witness) {
        out["witness_rule"] = to_string(*k.witness);
        if (k.witness_countermodel) {
          revalidate(!godel_satisfies(rule_to_quasiequation(*k.witness), k.witness_countermodel->chain,
                                      k.witness_countermodel->assignment),
                     "countermodel");
          out["witness"] = {{"chain", k.witness_countermodel->chain.str()},
                            {"assignment", godel_assignment_json(k.witness_countermodel->assignment)}};
        }
      }
      return {out, 0};
    }
    if (auto* t = std::get_if<CheckTable>(&cmd)) {
      std::ifstream in(t->path);
      if (!in) throw InputError("cannot read " + t->path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw InputError(std::string("malformed table JSON: ") + e.what());
      }
      auto table = InterpretationTable::from_json(j);
      table.validate();
      auto vs = check_bookkeeping(table, t->flavor);
      return {{{"status", vs.empty() ? "ok" : "violations"}, {"violations", violations_json(vs)}}, 0};
    }
    return run_gadget(std::get<Gadget>(cmd));
  } catch (const InputError& e) {
    return {{{"status", "error"}, {"message", e.what()}}, 1};
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Output out;
  std::optional<std::string> json_out;
  try {
    Invocation inv = parse_command(args);
    json_out = inv.json_out;
    out = run(inv.command);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const InputError& e) {
    out = {{{"status", "error"}, {"message", e.what()}}, 1};
  }
  std::string text = out.doc.dump(2);
  std::cout << text << "\n";
  if (json_out) {
    std::ofstream f(*json_out);
    if (!f) {
      std::cerr << "cannot write " << *json_out << "\n";
      return 1;
    }
    f << text << "\n";
  }
  return out.exit_code;
}

}  // namespace ratlog::cli
