#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "capp/solver/solver.hpp"

namespace capp::solver {

using cost::CostEquation;
using cost::CostProgram;
using cost::PExpr;

namespace {

// Interchange variables must start with an upper-case letter. Whole names
// are upper-cased; a collision (e.g. `m` vs `Map`) gets a numeric suffix in
// first-occurrence order.
std::map<std::string, std::string> variable_renaming(const CostProgram& p) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  auto note = [&](const std::string& v) {
    if (seen.insert(v).second) order.push_back(v);
  };
  auto note_expr = [&](const PExpr& e) {
    for (const auto& v : e.vars()) note(v);
  };
  for (const auto& eq : p.equations) {
    for (const auto& param : eq.params) note(param);
    note_expr(eq.direct);
    for (const auto& c : eq.calls)
      for (const auto& a : c.args) note_expr(a);
    for (const auto& c : eq.guard.conjuncts) {
      note_expr(c.lhs);
      note_expr(c.rhs);
    }
  }
  std::map<std::string, std::string> renaming;
  std::set<std::string> used;
  for (const auto& v : order) {
    std::string upper = v;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    std::string candidate = upper;
    for (int i = 2; !used.insert(candidate).second; ++i)
      candidate = upper + std::to_string(i);
    renaming[v] = candidate;
  }
  return renaming;
}

PExpr rename_vars(const PExpr& e, const std::map<std::string, std::string>& renaming) {
  std::map<std::string, PExpr> subst;
  for (const auto& [from, to] : renaming) subst.emplace(from, PExpr::var(to));
  return substitute(e, subst);
}

// Branches of a max in an upper-bound position become separate clauses.
// Distribution keeps the bound: max under +, nonnegative scaling and the
// left side of - is exact; max under the right side of - has no clause
// encoding.
std::vector<PExpr> expand_max(const PExpr& e) {
  switch (e.kind()) {
    case PExpr::Kind::Var:
    case PExpr::Kind::Const:
      return {e};
    case PExpr::Kind::Add: {
      std::vector<PExpr> out;
      for (const auto& l : expand_max(e.lhs()))
        for (const auto& r : expand_max(e.rhs())) out.push_back(PExpr::add(l, r));
      return out;
    }
    case PExpr::Kind::Sub: {
      auto rights = expand_max(e.rhs());
      if (rights.size() != 1)
        throw ExportError("max on the right of a subtraction");
      std::vector<PExpr> out;
      for (const auto& l : expand_max(e.lhs())) out.push_back(PExpr::sub(l, rights[0]));
      return out;
    }
    case PExpr::Kind::Scale: {
      std::vector<PExpr> out;
      for (const auto& inner : expand_max(e.operand()))
        out.push_back(PExpr::scale(e.value(), inner));
      return out;
    }
    case PExpr::Kind::Mul:
      throw ExportError("general product in a direct cost");
    case PExpr::Kind::Max: {
      std::vector<PExpr> out;
      for (const auto& arg : e.args()) {
        auto branches = expand_max(arg);
        out.insert(out.end(), branches.begin(), branches.end());
      }
      return out;
    }
  }
  return {e};
}

bool contains_max(const PExpr& e) {
  switch (e.kind()) {
    case PExpr::Kind::Max:
      return true;
    case PExpr::Kind::Var:
    case PExpr::Kind::Const:
      return false;
    case PExpr::Kind::Scale:
      return contains_max(e.operand());
    case PExpr::Kind::Add:
    case PExpr::Kind::Sub:
    case PExpr::Kind::Mul:
      return contains_max(e.lhs()) || contains_max(e.rhs());
  }
  return false;
}

void render_head(std::ostream& os, const CostEquation& eq,
                 const std::map<std::string, std::string>& renaming) {
  os << eq.head;
  if (eq.params.empty()) return;
  os << "(";
  for (size_t i = 0; i < eq.params.size(); ++i) {
    if (i) os << ",";
    os << renaming.at(eq.params[i]);
  }
  os << ")";
}

}  // namespace

std::string export_interchange(const CostProgram& p) {
  auto renaming = variable_renaming(p);
  std::ostringstream os;
  for (const auto& eq : p.equations) {
    for (const auto& call : eq.calls)
      for (const auto& a : call.args)
        if (contains_max(a)) throw ExportError("max inside call arguments");
    for (const auto& c : eq.guard.conjuncts)
      if (contains_max(c.lhs) || contains_max(c.rhs))
        throw ExportError("max inside a guard");
    for (const auto& direct : expand_max(simplify(rename_vars(eq.direct, renaming)))) {
      os << "eq(";
      render_head(os, eq, renaming);
      os << ", ";
      PExpr d = simplify(direct);
      if (d.is_const())
        os << d.value().to_string();
      else
        os << "nat(" << to_text(d, true) << ")";
      os << ", [";
      for (size_t i = 0; i < eq.calls.size(); ++i) {
        if (i) os << ", ";
        os << eq.calls[i].callee << "(";
        for (size_t j = 0; j < eq.calls[i].args.size(); ++j) {
          if (j) os << ",";
          os << to_text(rename_vars(eq.calls[i].args[j], renaming), true);
        }
        os << ")";
      }
      os << "], [";
      for (size_t i = 0; i < eq.guard.conjuncts.size(); ++i) {
        if (i) os << ", ";
        const auto& c = eq.guard.conjuncts[i];
        os << to_text(rename_vars(c.lhs, renaming), true)
           << (c.rel == cost::Constraint::Rel::Ge ? " >= " : " = ")
           << to_text(rename_vars(c.rhs, renaming), true);
      }
      os << "]).\n";
    }
  }
  return os.str();
}

}  // namespace capp::solver
