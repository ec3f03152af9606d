#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "capp/cost/env.hpp"
#include "capp/cost/program.hpp"
#include "capp/minisl/ast.hpp"

namespace capp::cost {

// Loop guard convention. Exclusive runs the body for counter values
// 0..bound-1 (recur while bound >= i+1), matching range(0, bound) and the
// solved closed forms; Inclusive (recur while bound >= i) runs one extra
// iteration and is kept as a compatibility mode.
enum class LoopBound { Exclusive, Inclusive };

// Integer-valued source expression to linear cost expression. Products and
// divisions must have a constant side (NonLinear otherwise).
PExpr infer_expr(const Env& env, const minisl::ExprPtr& e);

// Boolean-valued source expression to conjunctive guard:
//   a >= b -> a >= b;  a > b -> a >= b+1;  a == b -> a = b;
//   a && b -> conjunction;  bare integer expression e -> e = 1.
Guard infer_guard(const Env& env, const minisl::ExprPtr& e);

// Negation as a disjunction (list) of single-constraint guards:
//   not(a >= b) -> [b >= a+1]
//   not(a  = b) -> [a >= b+1], [b >= a+1]
//   not(c1 and ... and cn) -> concatenation of the negations of each ci.
// A bare boolean-parameter guard [v = 1] negates to [v = 0].
std::vector<Guard> negate_guard(const Guard& g, const std::set<std::string>& boolean_syms);

// Cost of a statement: direct expression, pending cost-function calls, and
// the auxiliary equations generated for nested ifs and loops.
struct StmtCost {
  PExpr direct;
  std::vector<CostCall> calls;
  std::vector<CostEquation> equations;
};

StmtCost infer_stmt(const Env& env, const minisl::StmtPtr& s,
                    LoopBound mode = LoopBound::Exclusive);

struct InferenceResult {
  CostProgram program;
  Env env;
};

// Full pipeline for a well-formed function: builds the environment (with
// optional symbol renames), derives the equations and prepends the entry
// equation main(...) with an empty guard. Parameters that never occur in a
// cost or guard are dropped from main's signature.
InferenceResult infer_function(const minisl::FunctionDef& fn,
                               const std::map<std::string, std::string>& symbol_overrides = {},
                               LoopBound mode = LoopBound::Exclusive);

}  // namespace capp::cost
