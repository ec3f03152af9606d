#pragma once

#include <stdexcept>
#include <string>

#include "capp/cost/program.hpp"

namespace capp::cost {

struct FormatError : std::runtime_error {
  FormatError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

// One equation per line:
//   head(p1,...,pk) = <direct> [+ callee(args)]* [g1, g2, ...]
// A zero direct cost is omitted when calls are present; the empty guard
// prints as `[]`. parse_program accepts exactly what to_text emits plus
// hand-written equations in the same shape.
std::string to_text(const CostProgram& p);
CostProgram parse_program(const std::string& text);

// A single expression in the same syntax (no calls). Used by tooling/tests.
PExpr parse_pexpr(const std::string& text);

}  // namespace capp::cost
