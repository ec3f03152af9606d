#pragma once

#include <vector>

#include "capp/diagnostics.hpp"
#include "capp/minisl/ast.hpp"

namespace capp::minisl {

// Checks binding discipline on a parsed function: every name is a parameter
// or an enclosing counter, no for-counter shadows a live name, loop bounds
// are integer-valued and service names are identifiers. An empty result
// means the function is well-formed.
std::vector<Diagnostic> check_wellformed(const FunctionDef& fn);

}  // namespace capp::minisl
