// Text syntax for formulas and rules: tokenizer, recursive-descent parser,
// desugaring and the canonical printer.

#include <cctype>
#include <string_view>

#include "ratlog/formula.hpp"

namespace ratlog {

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : InputError("at offset " + std::to_string(position) + ": " + message), kind_(kind), position_(position) {}

SugaredFormula SugaredFormula::lift(const Formula& f) {
  SugaredFormula s;
  s.op = SugarOp::Core;
  s.leaf = f;
  return s;
}

namespace {

constexpr unsigned kMaxExponent = 4096;

enum class Tok {
  End, Arrow, Equiv, Or, And, Star, OPlus, LParen, RParen, Tilde, Caret, Hash, Slash, Int, Var, Comma, Turnstile
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // digits for Int and Var
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t at = i;
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, at, {}});
      i += len;
    };
    if (starts("<->")) emit(Tok::Equiv, 3);
    else if (starts("(+)")) emit(Tok::OPlus, 3);
    else if (starts("->")) emit(Tok::Arrow, 2);
    else if (starts("\\/")) emit(Tok::Or, 2);
    else if (starts("/\\")) emit(Tok::And, 2);
    else if (starts("|-")) emit(Tok::Turnstile, 2);
    else if (c == '*') emit(Tok::Star, 1);
    else if (c == '(') emit(Tok::LParen, 1);
    else if (c == ')') emit(Tok::RParen, 1);
    else if (c == '~') emit(Tok::Tilde, 1);
    else if (c == '^') emit(Tok::Caret, 1);
    else if (c == '#') emit(Tok::Hash, 1);
    else if (c == '/') emit(Tok::Slash, 1);
    else if (c == ',') emit(Tok::Comma, 1);
    else if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Int, at, std::string(s.substr(at, i - at))});
    } else if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string_view word = s.substr(at, i - at);
      bool ok = word.size() > 1 && word[0] == 'x';
      for (std::size_t k = 1; ok && k < word.size(); ++k) ok = std::isdigit(static_cast<unsigned char>(word[k])) != 0;
      if (!ok) {
        throw ParseError(ParseError::Kind::Syntax, at,
                         "unknown identifier '" + std::string(word) + "' (variables are x1, x2, ...)");
      }
      out.push_back({Tok::Var, at, std::string(word.substr(1))});
    } else {
      throw ParseError(ParseError::Kind::Syntax, at, std::string("unexpected character '") + s[i] + "'");
    }
  }
  out.push_back({Tok::End, s.size(), {}});
  return out;
}

const char* describe(Tok k) {
  switch (k) {
    case Tok::End: return "end of input";
    case Tok::Arrow: return "'->'";
    case Tok::Equiv: return "'<->'";
    case Tok::Or: return "'\\/'";
    case Tok::And: return "'/\\'";
    case Tok::Star: return "'*'";
    case Tok::OPlus: return "'(+)'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Tilde: return "'~'";
    case Tok::Caret: return "'^'";
    case Tok::Hash: return "'#'";
    case Tok::Slash: return "'/'";
    case Tok::Int: return "integer";
    case Tok::Var: return "variable";
    case Tok::Comma: return "','";
    case Tok::Turnstile: return "'|-'";
  }
  return "token";
}

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  SugaredFormula formula() { return imp(); }

  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k) {
    if (peek().kind != k) {
      throw ParseError(ParseError::Kind::Syntax, peek().pos,
                       std::string("expected ") + describe(k) + ", found " + describe(peek().kind));
    }
    return toks_[pos_++];
  }

private:
  static SugaredFormula node(SugarOp op, std::vector<SugaredFormula> args, std::size_t pos) {
    SugaredFormula s;
    s.op = op;
    s.args = std::move(args);
    s.position = pos;
    return s;
  }

  SugaredFormula imp() {
    SugaredFormula l = disj();
    std::size_t at = peek().pos;
    if (accept(Tok::Arrow)) return node(SugarOp::Imp, {std::move(l), imp()}, at);
    return l;
  }

  SugaredFormula disj() {
    SugaredFormula acc = conj();
    for (std::size_t at = peek().pos; accept(Tok::Or); at = peek().pos) acc = node(SugarOp::Or, {std::move(acc), conj()}, at);
    return acc;
  }

  SugaredFormula conj() {
    SugaredFormula acc = fuse();
    for (std::size_t at = peek().pos; accept(Tok::And); at = peek().pos) acc = node(SugarOp::And, {std::move(acc), fuse()}, at);
    return acc;
  }

  SugaredFormula fuse() {
    SugaredFormula acc = atom();
    for (std::size_t at = peek().pos; accept(Tok::Star); at = peek().pos) acc = node(SugarOp::Fuse, {std::move(acc), atom()}, at);
    return acc;
  }

  SugaredFormula atom() {
    SugaredFormula acc = power();
    while (true) {
      std::size_t at = peek().pos;
      if (accept(Tok::Equiv)) {
        acc = node(SugarOp::Equiv, {std::move(acc), power()}, at);
      } else if (accept(Tok::OPlus)) {
        acc = node(SugarOp::OPlus, {std::move(acc), power()}, at);
      } else {
        return acc;
      }
    }
  }

  SugaredFormula power() {
    SugaredFormula acc = unary();
    for (std::size_t at = peek().pos; accept(Tok::Caret); at = peek().pos) {
      const Token& n = expect(Tok::Int);
      if (n.text.size() > 6 || std::stoul(n.text) > kMaxExponent) {
        throw ParseError(ParseError::Kind::Syntax, n.pos, "exponent too large");
      }
      SugaredFormula p = node(SugarOp::Pow, {std::move(acc)}, at);
      p.exponent = static_cast<unsigned>(std::stoul(n.text));
      acc = std::move(p);
    }
    return acc;
  }

  SugaredFormula unary() {
    const Token& t = peek();
    std::size_t at = t.pos;
    switch (t.kind) {
      case Tok::Tilde:
        ++pos_;
        return node(SugarOp::Neg, {unary()}, at);
      case Tok::LParen: {
        ++pos_;
        SugaredFormula inner = formula();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Int: {
        ++pos_;
        if (t.text == "0") return leaf(Formula::zero(), at);
        if (t.text == "1") return leaf(Formula::one(), at);
        throw ParseError(ParseError::Kind::Syntax, at, "bare integer " + t.text + " (write constants as #m/n)");
      }
      case Tok::Hash: {
        ++pos_;
        Integer num(expect(Tok::Int).text);
        expect(Tok::Slash);
        const Token& d = expect(Tok::Int);
        Integer den(d.text);
        if (den == 0) throw ParseError(ParseError::Kind::Syntax, d.pos, "zero denominator");
        Rational q(num, den);
        if (!q.in_unit_interval()) {
          throw ParseError(ParseError::Kind::OutOfRange, at, "constant " + q.str() + " lies outside [0,1]");
        }
        return leaf(Formula::constant(q), at);
      }
      case Tok::Var: {
        ++pos_;
        if (t.text.size() > 9) throw ParseError(ParseError::Kind::Syntax, at, "variable index too large");
        return leaf(Formula::var(static_cast<unsigned>(std::stoul(t.text))), at);
      }
      default:
        throw ParseError(ParseError::Kind::Syntax, at, std::string("unexpected ") + describe(t.kind));
    }
  }

  static SugaredFormula leaf(Formula f, std::size_t at) {
    SugaredFormula s = SugaredFormula::lift(f);
    s.position = at;
    return s;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

enum Prec { kImp = 1, kOr = 2, kAnd = 3, kFuse = 4, kLeaf = 5 };

int precedence(const Formula& f) {
  switch (f.op()) {
    case Op::Imp: return kImp;
    case Op::Or: return kOr;
    case Op::And: return kAnd;
    case Op::Fuse: return kFuse;
    default: return kLeaf;
  }
}

void print(const Formula& f, int need, std::string& out) {
  bool paren = precedence(f) < need;
  if (paren) out += '(';
  switch (f.op()) {
    case Op::Var: out += "x" + std::to_string(f.var_index()); break;
    case Op::Const: out += "#" + f.value().num().get_str() + "/" + f.value().den().get_str(); break;
    case Op::Zero: out += "0"; break;
    case Op::One: out += "1"; break;
    case Op::Imp:
      print(f.lhs(), kOr, out);
      out += " -> ";
      print(f.rhs(), kImp, out);
      break;
    case Op::Or:
      print(f.lhs(), kOr, out);
      out += " \\/ ";
      print(f.rhs(), kAnd, out);
      break;
    case Op::And:
      print(f.lhs(), kAnd, out);
      out += " /\\ ";
      print(f.rhs(), kFuse, out);
      break;
    case Op::Fuse:
      print(f.lhs(), kFuse, out);
      out += " * ";
      print(f.rhs(), kLeaf, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

Formula desugar(const SugaredFormula& f) {
  auto arg = [&](std::size_t i) { return desugar(f.args.at(i)); };
  switch (f.op) {
    case SugarOp::Core: return f.leaf;
    case SugarOp::Neg: return neg(arg(0));
    case SugarOp::Equiv: return equiv(arg(0), arg(1));
    case SugarOp::Pow:
      if (f.exponent == 0) throw ParseError(ParseError::Kind::ZeroExponent, f.position, "exponent 0 is not allowed");
      return power(arg(0), f.exponent);
    case SugarOp::OPlus: return oplus(arg(0), arg(1));
    case SugarOp::And: return Formula::meet(arg(0), arg(1));
    case SugarOp::Or: return Formula::join(arg(0), arg(1));
    case SugarOp::Fuse: return Formula::fuse(arg(0), arg(1));
    case SugarOp::Imp: return Formula::imp(arg(0), arg(1));
  }
  throw std::logic_error("unhandled sugar node");
}

SugaredFormula parse_sugared(const std::string& text) {
  Parser p(text);
  SugaredFormula f = p.formula();
  p.expect(Tok::End);
  return f;
}

Formula parse_formula(const std::string& text) { return desugar(parse_sugared(text)); }

Rule parse_rule(const std::string& text) {
  Parser p(text);
  Rule r{{}, Formula::zero()};
  if (!p.accept(Tok::Turnstile)) {
    r.premises.push_back(desugar(p.formula()));
    while (p.accept(Tok::Comma)) r.premises.push_back(desugar(p.formula()));
    p.expect(Tok::Turnstile);
  }
  r.conclusion = desugar(p.formula());
  p.expect(Tok::End);
  return r;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, kImp, out);
  return out;
}

std::string to_string(const Rule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) out += ", ";
    out += to_string(r.premises[i]);
  }
  out += r.premises.empty() ? "|- " : " |- ";
  out += to_string(r.conclusion);
  return out;
}

std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

}  // namespace ratlog
