#pragma once

#include <string>
#include <vector>

#include "capp/cost/pexpr.hpp"

namespace capp::cost {

struct CostCall {
  std::string callee;
  std::vector<PExpr> args;
  friend bool operator==(const CostCall& a, const CostCall& b) {
    return a.callee == b.callee && a.args == b.args;
  }
};

// head(params) = direct + calls  [guard]
struct CostEquation {
  std::string head;
  std::vector<std::string> params;
  PExpr direct;
  std::vector<CostCall> calls;
  Guard guard;
  friend bool operator==(const CostEquation& a, const CostEquation& b) {
    return a.head == b.head && a.params == b.params && a.direct == b.direct &&
           a.calls == b.calls && a.guard == b.guard;
  }
};

// Ordered equation list; the first equation is the entry point.
struct CostProgram {
  std::vector<CostEquation> equations;
  const CostEquation& entry() const { return equations.front(); }
  friend bool operator==(const CostProgram& a, const CostProgram& b) {
    return a.equations == b.equations;
  }
};

// Structural checks: nonempty, every callee defined, every variable of a
// right-hand side / guard among the equation's parameters. Returns problem
// descriptions, empty when the program is closed.
std::vector<std::string> check_closed(const CostProgram& p);

}  // namespace capp::cost
