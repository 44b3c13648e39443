#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "lawshield/ltl.hpp"

namespace lawshield {

/// A digitized traffic rule: a named formula plus its threshold
/// constants. Constants can be rebound without reparsing; the AST
/// never changes after load. Immutable formula + value-type constants
/// make copies safe to share across threads.
class LawFile {
 public:
  static LawFile load(const std::filesystem::path& path, const ltl::PredicateRegistry& registry);
  static LawFile from_string(std::string name, const std::string& text,
                             const ltl::PredicateRegistry& registry);

  const std::string& name() const { return name_; }
  const ltl::Formula& formula() const { return *formula_; }
  const ltl::FormulaPtr& formula_ptr() const { return formula_; }
  const std::map<std::string, double>& constants() const { return constants_; }
  const std::string& source() const { return source_; }

  void rebind(const std::string& constant, double value);
  LawFile rebound(const std::string& constant, double value) const;

  /// Context wired to this law's constants. Flags still need to be
  /// filled in by the caller (scenario-dependent).
  ltl::EvalContext context(const ltl::PredicateRegistry& registry) const;

  int eval(const Trace& trace, const ltl::EvalContext& ctx) const {
    return ltl::eval_trace(*formula_, trace, ctx);
  }

 private:
  std::string name_;
  std::string source_;
  ltl::FormulaPtr formula_;
  std::map<std::string, double> constants_;
};

}  // namespace lawshield
