#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "capp/minisl/ast.hpp"

namespace capp::cost {

struct InferError : std::runtime_error {
  enum class Kind { SymbolCollision, NonLinear, NotBoolean, NotInteger };
  InferError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  Kind kind;
};

// Maps source names to cost-program symbols. Parameters keep declaration
// order, services first-use order; the two symbol sets are disjoint.
// Counters are tracked by name while inference walks the tree.
struct Env {
  std::vector<std::pair<std::string, std::string>> params;    // name -> symbol
  std::vector<std::pair<std::string, std::string>> services;  // name -> symbol
  std::set<std::string> boolean_params;  // symbols of parameters used as bare guards

  std::optional<std::string> param_symbol(const std::string& name) const;
  std::optional<std::string> service_symbol(const std::string& name) const;
  // Index in declaration / first-use order, for deterministic signatures.
  int param_index(const std::string& symbol) const;
  int service_index(const std::string& symbol) const;
};

// Builds the symbol environment for a well-formed function: one symbol per
// parameter and per syntactically-called service. Symbols default to the
// source names; `symbol_overrides` renames selected ones (useful to match
// externally fixed naming conventions). A parameter and a service resolving
// to the same symbol is a SymbolCollision error.
Env build_env(const minisl::FunctionDef& fn,
              const std::map<std::string, std::string>& symbol_overrides = {});

}  // namespace capp::cost
