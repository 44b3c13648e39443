#include "lawshield/ltl.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace lawshield::ltl {

namespace {

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression constructors / printing / equality

ExprPtr expr_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

ExprPtr expr_name(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Name;
  e->name = std::move(name);
  return e;
}

static ExprPtr expr_node(Expr::Kind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr expr_neg(ExprPtr a) { return expr_node(Expr::Kind::Neg, std::move(a), nullptr); }
ExprPtr expr_sub(ExprPtr a, ExprPtr b) { return expr_node(Expr::Kind::Sub, std::move(a), std::move(b)); }
ExprPtr expr_mul(ExprPtr a, ExprPtr b) { return expr_node(Expr::Kind::Mul, std::move(a), std::move(b)); }
ExprPtr expr_max(ExprPtr a, ExprPtr b) { return expr_node(Expr::Kind::Max, std::move(a), std::move(b)); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: return fmt_number(e.number);
    case Expr::Kind::Name: return e.name;
    case Expr::Kind::Neg: return "-(" + to_string(*e.a) + ")";
    case Expr::Kind::Sub: return "(" + to_string(*e.a) + " - " + to_string(*e.b) + ")";
    case Expr::Kind::Mul: return "(" + to_string(*e.a) + " * " + to_string(*e.b) + ")";
    case Expr::Kind::Max: return "max(" + to_string(*e.a) + ", " + to_string(*e.b) + ")";
  }
  return "";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.number == b.number;
    case Expr::Kind::Name: return a.name == b.name;
    case Expr::Kind::Neg: return structurally_equal(*a.a, *b.a);
    default: return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
  }
}

// ---------------------------------------------------------------------------
// Formula constructors / printing / equality

FormulaPtr make_atom(std::string name, std::vector<ExprPtr> args) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Atom;
  f->atom.name = std::move(name);
  f->atom.args = std::move(args);
  return f;
}

FormulaPtr make_unary(Op op, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->a = std::move(a);
  return f;
}

FormulaPtr make_binary(Op op, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::Atom) {
    if (a.atom.name != b.atom.name) return false;
    if (a.atom.args.size() != b.atom.args.size()) return false;
    for (std::size_t i = 0; i < a.atom.args.size(); ++i) {
      if (!structurally_equal(*a.atom.args[i], *b.atom.args[i])) return false;
    }
    return true;
  }
  if (static_cast<bool>(a.a) != static_cast<bool>(b.a)) return false;
  if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
  if (a.a && !structurally_equal(*a.a, *b.a)) return false;
  if (a.b && !structurally_equal(*a.b, *b.b)) return false;
  return true;
}

namespace {

std::string atom_to_string(const AtomRef& atom) {
  if (atom.args.empty()) return atom.name;
  std::string out = atom.name + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(*atom.args[i]);
  }
  return out + ")";
}

// children always fully parenthesized unless atomic, so the printed
// form reparses to the identical tree
std::string child_to_string(const Formula& f) {
  if (f.op == Op::Atom) return atom_to_string(f.atom);
  return "(" + to_string(f) + ")";
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.op) {
    case Op::Atom: return atom_to_string(f.atom);
    case Op::Not: return "!" + child_to_string(*f.a);
    case Op::Next: return "X " + child_to_string(*f.a);
    case Op::Always: return "G " + child_to_string(*f.a);
    case Op::Eventually: return "F " + child_to_string(*f.a);
    case Op::And: return child_to_string(*f.a) + " & " + child_to_string(*f.b);
    case Op::Or: return child_to_string(*f.a) + " | " + child_to_string(*f.b);
    case Op::Implies: return child_to_string(*f.a) + " -> " + child_to_string(*f.b);
    case Op::Until: return child_to_string(*f.a) + " U " + child_to_string(*f.b);
  }
  return "";
}

// ---------------------------------------------------------------------------
// PredicateRegistry

PredicateRegistry::PredicateRegistry() {
  add("true", 0, [](const Trace&, std::size_t, const EvalContext&, const std::vector<double>&) {
    return true;
  });
  add("false", 0, [](const Trace&, std::size_t, const EvalContext&, const std::vector<double>&) {
    return false;
  });
}

void PredicateRegistry::add(const std::string& name, int arity, PredicateFn fn) {
  predicates_[name] = Entry{arity, std::move(fn)};
}

void PredicateRegistry::add_var(const std::string& name, ContextVarFn fn) {
  vars_[name] = std::move(fn);
}

bool PredicateRegistry::has(const std::string& name) const { return predicates_.count(name) > 0; }

int PredicateRegistry::arity(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw EvalError("unknown atom: " + name);
  return it->second.arity;
}

bool PredicateRegistry::has_var(const std::string& name) const { return vars_.count(name) > 0; }

bool PredicateRegistry::eval(const std::string& name, const Trace& trace, std::size_t i,
                             const EvalContext& ctx, const std::vector<double>& args) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw EvalError("unknown atom: " + name);
  return it->second.fn(trace, i, ctx, args);
}

double PredicateRegistry::var(const std::string& name, const Trace& trace, std::size_t i) const {
  auto it = vars_.find(name);
  if (it == vars_.end()) throw EvalError("unknown context variable: " + name);
  return it->second(trace, i);
}

double EvalContext::flag(const std::string& name) const {
  auto it = flags.find(name);
  if (it == flags.end()) throw EvalError("missing context field: " + name);
  return it->second;
}

double EvalContext::constant_or_throw(const std::string& name) const {
  if (constants) {
    auto it = constants->find(name);
    if (it != constants->end()) return it->second;
  }
  throw EvalError("unbound constant: " + name);
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Comma,
  Not,
  And,
  Or,
  Arrow,
  Minus,
  Star,
  Always,
  Eventually,
  Next,
  Until,
  Ident,
  Number,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  Token next() {
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", 0, line, col};
    char c = text_[pos_];
    auto one = [&](Tok k) {
      ++pos_;
      ++col_;
      return Token{k, std::string(1, c), 0, line, col};
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case '!': return one(Tok::Not);
      case '&': return one(Tok::And);
      case '|': return one(Tok::Or);
      case '*': return one(Tok::Star);
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          col_ += 2;
          return {Tok::Arrow, "->", 0, line, col};
        }
        return one(Tok::Minus);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '.')) {
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
      std::string s = text_.substr(start, pos_ - start);
      col_ += static_cast<int>(s.size());
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size()) {
        throw ParseError("bad number literal '" + s + "'", line, col);
      }
      return {Tok::Number, s, v, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      std::string s = text_.substr(start, pos_ - start);
      col_ += static_cast<int>(s.size());
      if (s == "G") return {Tok::Always, s, 0, line, col};
      if (s == "F") return {Tok::Eventually, s, 0, line, col};
      if (s == "X") return {Tok::Next, s, 0, line, col};
      if (s == "U") return {Tok::Until, s, 0, line, col};
      return {Tok::Ident, s, 0, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
//
//   formula := implies
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := until ('&' until)*
//   until   := unary ('U' until)?
//   unary   := ('!'|'G'|'F'|'X') unary | primary
//   primary := '(' formula ')' | ident args?
//
//   expr    := term ('-' term)*
//   term    := factor ('*' factor)*
//   factor  := number | '-' factor | 'max' '(' expr ',' expr ')'
//            | ident | '(' expr ')'

class Parser {
 public:
  Parser(std::vector<Token> tokens, const PredicateRegistry& registry,
         const std::map<std::string, double>& constants)
      : tokens_(std::move(tokens)), registry_(registry), constants_(constants) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) {
      throw ParseError("expected " + what + ", got '" + peek().text + "'", peek().line, peek().col);
    }
  }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (accept(Tok::Arrow)) {
      return make_binary(Op::Implies, std::move(lhs), parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (accept(Tok::Or)) f = make_binary(Op::Or, std::move(f), parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (accept(Tok::And)) f = make_binary(Op::And, std::move(f), parse_until());
    return f;
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (accept(Tok::Until)) {
      return make_binary(Op::Until, std::move(lhs), parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (accept(Tok::Not)) return make_unary(Op::Not, parse_unary());
    if (accept(Tok::Always)) return make_unary(Op::Always, parse_unary());
    if (accept(Tok::Eventually)) return make_unary(Op::Eventually, parse_unary());
    if (accept(Tok::Next)) return make_unary(Op::Next, parse_unary());
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (accept(Tok::LParen)) {
      FormulaPtr f = parse_implies();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      Token name = take();
      std::vector<ExprPtr> args;
      if (accept(Tok::LParen)) {
        args.push_back(parse_expr());
        while (accept(Tok::Comma)) args.push_back(parse_expr());
        expect(Tok::RParen, "')'");
      }
      if (!registry_.has(name.text)) {
        throw ParseError("unknown atom: " + name.text, name.line, name.col);
      }
      int want = registry_.arity(name.text);
      if (want != static_cast<int>(args.size())) {
        throw ParseError("atom " + name.text + " expects " + std::to_string(want) +
                             " argument(s), got " + std::to_string(args.size()),
                         name.line, name.col);
      }
      return make_atom(name.text, std::move(args));
    }
    throw ParseError("expected a formula, got '" + peek().text + "'", peek().line, peek().col);
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (accept(Tok::Minus)) e = expr_sub(std::move(e), parse_term());
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (accept(Tok::Star)) e = expr_mul(std::move(e), parse_factor());
    return e;
  }

  ExprPtr parse_factor() {
    if (peek().kind == Tok::Number) return expr_number(take().number);
    if (accept(Tok::Minus)) return expr_neg(parse_factor());
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (peek().kind == Tok::Ident) {
      Token name = take();
      if (name.text == "max") {
        expect(Tok::LParen, "'(' after max");
        ExprPtr a = parse_expr();
        expect(Tok::Comma, "','");
        ExprPtr b = parse_expr();
        expect(Tok::RParen, "')'");
        return expr_max(std::move(a), std::move(b));
      }
      if (constants_.count(name.text) == 0 && !registry_.has_var(name.text)) {
        throw ParseError("unbound constant: " + name.text, name.line, name.col);
      }
      return expr_name(name.text);
    }
    throw ParseError("expected an expression, got '" + peek().text + "'", peek().line, peek().col);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const PredicateRegistry& registry_;
  const std::map<std::string, double>& constants_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const PredicateRegistry& registry,
                         const std::map<std::string, double>& constants) {
  Lexer lexer(text);
  Parser parser(lexer.run(), registry, constants);
  return parser.parse();
}

// ---------------------------------------------------------------------------
// Semantics

double eval_expr(const Expr& e, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.number;
    case Expr::Kind::Name:
      if (ctx.constants) {
        auto it = ctx.constants->find(e.name);
        if (it != ctx.constants->end()) return it->second;
      }
      if (ctx.registry && ctx.registry->has_var(e.name)) return ctx.registry->var(e.name, trace, i);
      throw EvalError("unbound name in expression: " + e.name);
    case Expr::Kind::Neg: return -eval_expr(*e.a, trace, i, ctx);
    case Expr::Kind::Sub: return eval_expr(*e.a, trace, i, ctx) - eval_expr(*e.b, trace, i, ctx);
    case Expr::Kind::Mul: return eval_expr(*e.a, trace, i, ctx) * eval_expr(*e.b, trace, i, ctx);
    case Expr::Kind::Max:
      return std::max(eval_expr(*e.a, trace, i, ctx), eval_expr(*e.b, trace, i, ctx));
  }
  throw EvalError("bad expression node");
}

bool eval_at(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  const std::size_t n = trace.size();
  if (i >= n) throw EvalError("eval_at: step index out of range");
  switch (f.op) {
    case Op::Atom: {
      if (!ctx.registry) throw EvalError("no predicate registry in context");
      std::vector<double> args;
      args.reserve(f.atom.args.size());
      for (const auto& a : f.atom.args) args.push_back(eval_expr(*a, trace, i, ctx));
      return ctx.registry->eval(f.atom.name, trace, i, ctx, args);
    }
    case Op::Not: return !eval_at(*f.a, trace, i, ctx);
    case Op::And: return eval_at(*f.a, trace, i, ctx) && eval_at(*f.b, trace, i, ctx);
    case Op::Or: return eval_at(*f.a, trace, i, ctx) || eval_at(*f.b, trace, i, ctx);
    case Op::Implies: return !eval_at(*f.a, trace, i, ctx) || eval_at(*f.b, trace, i, ctx);
    case Op::Next:
      // strong next: false at the last step
      return i + 1 < n && eval_at(*f.a, trace, i + 1, ctx);
    case Op::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (eval_at(*f.b, trace, j, ctx)) return true;
        if (!eval_at(*f.a, trace, j, ctx)) return false;
      }
      return false;
    case Op::Always:
      for (std::size_t k = i; k < n; ++k) {
        if (!eval_at(*f.a, trace, k, ctx)) return false;
      }
      return true;
    case Op::Eventually:
      for (std::size_t k = i; k < n; ++k) {
        if (eval_at(*f.a, trace, k, ctx)) return true;
      }
      return false;
  }
  throw EvalError("bad formula node");
}

int eval_trace(const Formula& f, const Trace& trace, const EvalContext& ctx) {
  if (trace.empty()) throw EvalError("eval_trace: empty trace");
  return eval_at(f, trace, 0, ctx) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Failure explanation

namespace {

Failure why_false(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx);

Failure why_true(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  const std::size_t n = trace.size();
  switch (f.op) {
    case Op::Atom: return {atom_to_string(f.atom), i};
    case Op::Not: {
      Failure sub = why_false(*f.a, trace, i, ctx);
      return {"!" + sub.path, sub.step};
    }
    case Op::And: {
      Failure sub = why_true(*f.a, trace, i, ctx);
      return {"&/" + sub.path, sub.step};
    }
    case Op::Or: {
      if (eval_at(*f.a, trace, i, ctx)) {
        Failure sub = why_true(*f.a, trace, i, ctx);
        return {"|/" + sub.path, sub.step};
      }
      Failure sub = why_true(*f.b, trace, i, ctx);
      return {"|/" + sub.path, sub.step};
    }
    case Op::Implies: {
      if (!eval_at(*f.a, trace, i, ctx)) {
        Failure sub = why_false(*f.a, trace, i, ctx);
        return {"->[trigger off]/" + sub.path, sub.step};
      }
      Failure sub = why_true(*f.b, trace, i, ctx);
      return {"->/" + sub.path, sub.step};
    }
    case Op::Next: {
      Failure sub = why_true(*f.a, trace, i + 1, ctx);
      return {"X/" + sub.path, sub.step};
    }
    case Op::Until: {
      for (std::size_t j = i; j < n; ++j) {
        if (eval_at(*f.b, trace, j, ctx)) {
          Failure sub = why_true(*f.b, trace, j, ctx);
          return {"U/" + sub.path, sub.step};
        }
      }
      return {"U", i};
    }
    case Op::Always: {
      Failure sub = why_true(*f.a, trace, i, ctx);
      return {"G/" + sub.path, sub.step};
    }
    case Op::Eventually: {
      for (std::size_t j = i; j < n; ++j) {
        if (eval_at(*f.a, trace, j, ctx)) {
          Failure sub = why_true(*f.a, trace, j, ctx);
          return {"F/" + sub.path, sub.step};
        }
      }
      return {"F", i};
    }
  }
  return {"?", i};
}

Failure why_false(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  const std::size_t n = trace.size();
  switch (f.op) {
    case Op::Atom: return {atom_to_string(f.atom), i};
    case Op::Not: {
      Failure sub = why_true(*f.a, trace, i, ctx);
      return {"!" + sub.path, sub.step};
    }
    case Op::And: {
      if (!eval_at(*f.a, trace, i, ctx)) {
        Failure sub = why_false(*f.a, trace, i, ctx);
        return {"&/" + sub.path, sub.step};
      }
      Failure sub = why_false(*f.b, trace, i, ctx);
      return {"&/" + sub.path, sub.step};
    }
    case Op::Or: {
      Failure sub = why_false(*f.a, trace, i, ctx);
      Failure sub2 = why_false(*f.b, trace, i, ctx);
      return {"|{" + sub.path + ", " + sub2.path + "}", sub.step};
    }
    case Op::Implies: {
      // trigger held, requirement failed
      Failure sub = why_false(*f.b, trace, i, ctx);
      return {"->/" + sub.path, sub.step};
    }
    case Op::Next: {
      if (i + 1 >= n) return {"X[at trace end]", i};
      Failure sub = why_false(*f.a, trace, i + 1, ctx);
      return {"X/" + sub.path, sub.step};
    }
    case Op::Until: {
      for (std::size_t j = i; j < n; ++j) {
        if (!eval_at(*f.a, trace, j, ctx) && !eval_at(*f.b, trace, j, ctx)) {
          Failure sub = why_false(*f.b, trace, j, ctx);
          return {"U/" + sub.path, sub.step};
        }
      }
      Failure sub = why_false(*f.b, trace, n - 1, ctx);
      return {"U/" + sub.path, sub.step};
    }
    case Op::Always: {
      for (std::size_t k = i; k < n; ++k) {
        if (!eval_at(*f.a, trace, k, ctx)) {
          Failure sub = why_false(*f.a, trace, k, ctx);
          return {"G/" + sub.path, sub.step};
        }
      }
      return {"G", i};
    }
    case Op::Eventually: {
      Failure sub = why_false(*f.a, trace, n - 1, ctx);
      return {"F/" + sub.path, sub.step};
    }
  }
  return {"?", i};
}

}  // namespace

Failure explain_failure(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx) {
  return why_false(f, trace, i, ctx);
}

}  // namespace lawshield::ltl
