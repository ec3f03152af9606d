#include "capp/cost/program.hpp"

#include <algorithm>
#include <set>

namespace capp::cost {

std::vector<std::string> check_closed(const CostProgram& p) {
  std::vector<std::string> problems;
  if (p.equations.empty()) {
    problems.push_back("program has no equations");
    return problems;
  }
  std::set<std::string> heads;
  for (const auto& eq : p.equations) heads.insert(eq.head);
  for (const auto& eq : p.equations) {
    std::set<std::string> scope(eq.params.begin(), eq.params.end());
    auto check_vars = [&](const PExpr& e, const char* where) {
      for (const auto& v : e.vars())
        if (!scope.count(v))
          problems.push_back(eq.head + ": variable " + v + " in " + where +
                             " is not a parameter");
    };
    check_vars(eq.direct, "direct cost");
    for (const auto& call : eq.calls) {
      if (!heads.count(call.callee))
        problems.push_back(eq.head + ": callee " + call.callee + " is undefined");
      for (const auto& a : call.args) check_vars(a, "call arguments");
    }
    for (const auto& c : eq.guard.conjuncts) {
      check_vars(c.lhs, "guard");
      check_vars(c.rhs, "guard");
    }
  }
  return problems;
}

}  // namespace capp::cost
