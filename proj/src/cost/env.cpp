#include "capp/cost/env.hpp"

#include <algorithm>

namespace capp::cost {

using minisl::Stmt;
using minisl::StmtPtr;

std::optional<std::string> Env::param_symbol(const std::string& name) const {
  for (const auto& [n, s] : params)
    if (n == name) return s;
  return std::nullopt;
}

std::optional<std::string> Env::service_symbol(const std::string& name) const {
  for (const auto& [n, s] : services)
    if (n == name) return s;
  return std::nullopt;
}

int Env::param_index(const std::string& symbol) const {
  for (size_t i = 0; i < params.size(); ++i)
    if (params[i].second == symbol) return (int)i;
  return -1;
}

int Env::service_index(const std::string& symbol) const {
  for (size_t i = 0; i < services.size(); ++i)
    if (services[i].second == symbol) return (int)i;
  return -1;
}

namespace {

// Services in first syntactic occurrence order (guard of an if-call counts
// at the position of the if).
void collect_services(const StmtPtr& s, std::vector<std::string>& out) {
  if (!s) return;
  auto note = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  switch (s->kind) {
    case Stmt::Kind::Empty:
      return;
    case Stmt::Kind::Call:
      note(s->service);
      collect_services(s->cont, out);
      return;
    case Stmt::Kind::IfExp:
      collect_services(s->then_branch, out);
      collect_services(s->else_branch, out);
      return;
    case Stmt::Kind::IfCall:
      note(s->service);
      collect_services(s->then_branch, out);
      collect_services(s->else_branch, out);
      return;
    case Stmt::Kind::For:
      collect_services(s->body, out);
      return;
  }
}

// A parameter standing alone in boolean position (an if guard or a conjunct
// of &&) is treated as boolean-typed.
void mark_boolean(const minisl::ExprPtr& guard, const Env& env, std::set<std::string>& out) {
  if (!guard) return;
  if (guard->kind == minisl::Expr::Kind::ParamRef) {
    if (auto sym = env.param_symbol(guard->name)) out.insert(*sym);
    return;
  }
  if (guard->kind == minisl::Expr::Kind::BinOp && guard->op == minisl::BinOp::And) {
    mark_boolean(guard->lhs, env, out);
    mark_boolean(guard->rhs, env, out);
  }
}

void collect_boolean_params(const StmtPtr& s, const Env& env, std::set<std::string>& out) {
  if (!s) return;
  switch (s->kind) {
    case Stmt::Kind::Empty:
      return;
    case Stmt::Kind::Call:
      collect_boolean_params(s->cont, env, out);
      return;
    case Stmt::Kind::IfExp:
      mark_boolean(s->guard, env, out);
      collect_boolean_params(s->then_branch, env, out);
      collect_boolean_params(s->else_branch, env, out);
      return;
    case Stmt::Kind::IfCall:
      collect_boolean_params(s->then_branch, env, out);
      collect_boolean_params(s->else_branch, env, out);
      return;
    case Stmt::Kind::For:
      collect_boolean_params(s->body, env, out);
      return;
  }
}

}  // namespace

Env build_env(const minisl::FunctionDef& fn,
              const std::map<std::string, std::string>& symbol_overrides) {
  Env env;
  auto symbol_for = [&](const std::string& name) {
    auto it = symbol_overrides.find(name);
    return it == symbol_overrides.end() ? name : it->second;
  };

  // Parameters and services share one symbol space; a parameter and a
  // service may carry the same source name, which must still collide.
  std::map<std::string, std::string> owner;  // symbol -> "kind name"
  auto claim = [&](const std::string& kind, const std::string& name,
                   const std::string& symbol) {
    auto [it, fresh] = owner.emplace(symbol, kind + " " + name);
    if (!fresh && it->second != kind + " " + name)
      throw InferError(InferError::Kind::SymbolCollision,
                       "symbol '" + symbol + "' assigned to both " + it->second +
                           " and " + kind + " " + name);
  };

  for (const auto& p : fn.params) {
    std::string sym = symbol_for(p);
    claim("parameter", p, sym);
    env.params.emplace_back(p, sym);
  }
  std::vector<std::string> services;
  collect_services(fn.body, services);
  for (const auto& h : services) {
    std::string sym = symbol_for(h);
    claim("service", h, sym);
    env.services.emplace_back(h, sym);
  }
  collect_boolean_params(fn.body, env, env.boolean_params);
  return env;
}

}  // namespace capp::cost
