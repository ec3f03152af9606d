#pragma once

#include "capp/minisl/ast.hpp"
#include "capp/minisl/lexer.hpp"

namespace capp::minisl {

// Parses one complete function source. Throws ParseError on lexical or
// syntax errors. Name references are resolved against the parameter list and
// the enclosing for-counters (innermost counter wins); names bound by
// neither become CounterRefs and are reported by check_wellformed.
FunctionDef parse_function(const std::string& text, const std::string& source_name = "");

}  // namespace capp::minisl
