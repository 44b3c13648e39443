#include "lawshield/law.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lawshield {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

LawFile LawFile::from_string(std::string name, const std::string& text,
                             const ltl::PredicateRegistry& registry) {
  LawFile law;
  law.name_ = std::move(name);
  std::string formula_text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("name:", 0) == 0) {
      law.name_ = trim(t.substr(5));
      continue;
    }
    if (t.rfind("const", 0) == 0) {
      std::string rest = trim(t.substr(5));
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos) {
        throw ltl::ParseError("const line without '='", lineno, 1);
      }
      std::string cname = trim(rest.substr(0, eq));
      std::string cval = trim(rest.substr(eq + 1));
      if (cname.empty()) throw ltl::ParseError("const line without a name", lineno, 1);
      char* end = nullptr;
      double v = std::strtod(cval.c_str(), &end);
      if (end != cval.c_str() + cval.size() || cval.empty()) {
        throw ltl::ParseError("bad constant value '" + cval + "'", lineno, 1);
      }
      law.constants_[cname] = v;
      continue;
    }
    if (t.rfind("formula:", 0) == 0) {
      if (!formula_text.empty()) {
        throw ltl::ParseError("duplicate formula line", lineno, 1);
      }
      formula_text = trim(t.substr(8));
      continue;
    }
    throw ltl::ParseError("unrecognized law file line: " + t, lineno, 1);
  }
  if (formula_text.empty()) {
    throw ltl::ParseError("law file has no formula line", lineno, 1);
  }
  law.source_ = formula_text;
  law.formula_ = ltl::parse_formula(formula_text, registry, law.constants_);
  return law;
}

LawFile LawFile::load(const std::filesystem::path& path, const ltl::PredicateRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open law file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(path.stem().string(), buf.str(), registry);
}

void LawFile::rebind(const std::string& constant, double value) {
  auto it = constants_.find(constant);
  if (it == constants_.end()) {
    throw Error("rebind of undeclared constant: " + constant);
  }
  it->second = value;
}

LawFile LawFile::rebound(const std::string& constant, double value) const {
  LawFile copy = *this;
  copy.rebind(constant, value);
  return copy;
}

ltl::EvalContext LawFile::context(const ltl::PredicateRegistry& registry) const {
  ltl::EvalContext ctx;
  ctx.registry = &registry;
  ctx.constants = &constants_;
  return ctx;
}

}  // namespace lawshield
