#pragma once

#include <string>

#include "capp/minisl/ast.hpp"

namespace capp::minisl {

// Renders a function back to concrete syntax, one construct per line with
// two-space indentation. Re-parsing the output yields a structurally equal
// AST; the printed layout is also the canonical layout, so printing is a
// fixpoint.
std::string to_source(const FunctionDef& fn);

std::string to_source(const ExprPtr& expr);

}  // namespace capp::minisl
