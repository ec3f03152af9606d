#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "capp/cost/program.hpp"

namespace capp::solver {

// Symbol valuations. Partial for symbolic solving, full for concrete
// evaluation; guard symbols must be bound to integers.
using Binding = std::map<std::string, Rational>;

struct FuelExhausted : std::runtime_error {
  FuelExhausted() : std::runtime_error("evaluation fuel exhausted") {}
};

struct UnsupportedShape : std::runtime_error {
  explicit UnsupportedShape(const std::string& detail)
      : std::runtime_error("unsupported equation shape: " + detail) {}
};

struct EvalResult {
  Rational value;
  // Call sites where no equation guard was satisfied contribute 0; they are
  // reported here rather than failing the evaluation.
  std::vector<std::string> unmatched_calls;
};

// Unfolds the program from its entry equation under a full binding. When
// several guards of one cost function are satisfied the maximum alternative
// is taken. Each equation application consumes one unit of fuel.
EvalResult evaluate_concrete(const cost::CostProgram& p, const Binding& b,
                             long long fuel = 1'000'000);

// Closed-form solution for programs in the shapes the inference emits:
// single-equation heads, guarded alternative groups (collapsed by picking
// the satisfied branch when guards are decidable under the binding, by max
// over the alternatives otherwise) and counting loops (collapsed to
// iteration-count times body cost). Bound symbols are substituted up front.
// Throws UnsupportedShape for anything else (e.g. non-structural recursion).
cost::PExpr solve_symbolic(const cost::CostProgram& p, const Binding& b);

// Substitutes and simplifies; the result is a constant when no free symbols
// remain, otherwise the residual expression.
cost::PExpr instantiate(const cost::PExpr& e, const Binding& b);

// A conservative fuel budget sufficient to unfold an inference-produced
// program under the given binding: |equations| * prod(loop bound + 2).
long long sufficient_fuel(const cost::CostProgram& p, const Binding& b);

struct ExportError : std::runtime_error {
  explicit ExportError(const std::string& detail)
      : std::runtime_error("cannot export: " + detail) {}
};

// Renders the program as solver-interchange clauses, one per line:
//   eq(head(X1,...,Xk), <direct>, [call1, ...], [g1, ...]).
// Variables are upper-cased (with numeric suffixes on collision), symbolic
// direct costs are wrapped in nat(...), and a max in a direct cost is
// expanded into one clause per branch.
std::string export_interchange(const cost::CostProgram& p);

}  // namespace capp::solver
