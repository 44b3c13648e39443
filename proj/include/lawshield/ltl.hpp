#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lawshield/world.hpp"

namespace lawshield::ltl {

struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct EvalError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Threshold expressions (atom arguments)

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Name, Neg, Sub, Mul, Max };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;  // Kind::Name: a law constant or a context variable
  ExprPtr a;
  ExprPtr b;
};

ExprPtr expr_number(double v);
ExprPtr expr_name(std::string name);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_max(ExprPtr a, ExprPtr b);

std::string to_string(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Formulas

struct AtomRef {
  std::string name;
  std::vector<ExprPtr> args;
};

enum class Op { Atom, Not, And, Or, Implies, Next, Until, Always, Eventually };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::Atom;
  AtomRef atom;  // Op::Atom only
  FormulaPtr a;  // unary child / binary lhs
  FormulaPtr b;  // binary rhs
};

FormulaPtr make_atom(std::string name, std::vector<ExprPtr> args = {});
FormulaPtr make_unary(Op op, FormulaPtr a);
FormulaPtr make_binary(Op op, FormulaPtr a, FormulaPtr b);

bool structurally_equal(const Formula& a, const Formula& b);
std::string to_string(const Formula& f);

// ---------------------------------------------------------------------------
// Grounding

struct EvalContext;

/// Named predicates over trace steps plus named per-step context
/// variables usable inside threshold expressions. "true" and "false"
/// are pre-registered. Immutable once populated; evaluation is pure.
class PredicateRegistry {
 public:
  using PredicateFn =
      std::function<bool(const Trace&, std::size_t, const EvalContext&, const std::vector<double>&)>;
  using ContextVarFn = std::function<double(const Trace&, std::size_t)>;

  PredicateRegistry();

  void add(const std::string& name, int arity, PredicateFn fn);
  void add_var(const std::string& name, ContextVarFn fn);

  bool has(const std::string& name) const;
  int arity(const std::string& name) const;
  bool has_var(const std::string& name) const;

  bool eval(const std::string& name, const Trace& trace, std::size_t i, const EvalContext& ctx,
            const std::vector<double>& args) const;
  double var(const std::string& name, const Trace& trace, std::size_t i) const;

 private:
  struct Entry {
    int arity;
    PredicateFn fn;
  };
  std::map<std::string, Entry> predicates_;
  std::map<std::string, ContextVarFn> vars_;
};

struct EvalContext {
  const PredicateRegistry* registry = nullptr;
  const std::map<std::string, double>* constants = nullptr;
  std::map<std::string, double> flags;  // scenario-level values (e.g. "prescribed")

  double flag(const std::string& name) const;
  double constant_or_throw(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Parsing

/// Parses the law DSL. Grammar (loosest to tightest): `->` (right
/// assoc), `|`, `&`, `U`, unary `! G F X`, then atoms / parentheses.
/// Atom arguments are threshold expressions over numbers, law
/// constants, context variables, `-`, `*` and `max(a,b)`. Unknown
/// atoms, arity mismatches and unbound names are parse errors.
FormulaPtr parse_formula(const std::string& text, const PredicateRegistry& registry,
                         const std::map<std::string, double>& constants);

// ---------------------------------------------------------------------------
// Finite-trace semantics

/// LTL over finite traces with strong Next (X at the last step is
/// false). Until(a,b) needs b at some j >= i within the trace with a
/// holding on [i, j).
bool eval_at(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx);

/// phi(tau) as 0/1, i.e. eval_at from step 0. Trace must be nonempty.
int eval_trace(const Formula& f, const Trace& trace, const EvalContext& ctx);

double eval_expr(const Expr& e, const Trace& trace, std::size_t i, const EvalContext& ctx);

/// Path to the sub-formula that falsified `f` at step i, plus the
/// earliest step where it failed. Only valid when eval_at(...) is false.
struct Failure {
  std::string path;
  std::size_t step = 0;
};
Failure explain_failure(const Formula& f, const Trace& trace, std::size_t i, const EvalContext& ctx);

}  // namespace lawshield::ltl
