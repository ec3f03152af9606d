#include "capp/cost/infer.hpp"

#include <algorithm>

namespace capp::cost {

using minisl::BinOp;
using minisl::Expr;
using minisl::ExprPtr;
using minisl::Stmt;
using minisl::StmtPtr;

namespace {

[[noreturn]] void nonlinear(const std::string& detail) {
  throw InferError(InferError::Kind::NonLinear, detail);
}

}  // namespace

PExpr infer_expr(const Env& env, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::IntLit:
      if (e->value < 0) nonlinear("negative literal");
      return PExpr::constant(Rational(e->value));
    case Expr::Kind::CounterRef:
      return PExpr::var(e->name);
    case Expr::Kind::ParamRef: {
      auto sym = env.param_symbol(e->name);
      if (!sym)
        throw InferError(InferError::Kind::NotInteger, "unknown parameter " + e->name);
      return PExpr::var(*sym);
    }
    case Expr::Kind::BinOp: {
      if (minisl::is_boolean_op(e->op))
        throw InferError(InferError::Kind::NotInteger,
                         "boolean operator in integer position");
      PExpr l = simplify(infer_expr(env, e->lhs));
      PExpr r = simplify(infer_expr(env, e->rhs));
      switch (e->op) {
        case BinOp::Add:
          if (l.is_const() && r.is_const()) return PExpr::constant(l.value() + r.value());
          return PExpr::add(l, r);
        case BinOp::Sub:
          if (l.is_const() && r.is_const() && r.value() <= l.value())
            return PExpr::constant(l.value() - r.value());
          return PExpr::sub(l, r);
        case BinOp::Mul: {
          if (l.is_const() && r.is_const()) return PExpr::constant(l.value() * r.value());
          if (l.is_const()) {
            if (l.value().is_negative()) nonlinear("negative scaling coefficient");
            return PExpr::scale(l.value(), r);
          }
          if (r.is_const()) {
            if (r.value().is_negative()) nonlinear("negative scaling coefficient");
            return PExpr::scale(r.value(), l);
          }
          nonlinear("product of two non-constant expressions");
        }
        case BinOp::Div: {
          if (!r.is_const()) nonlinear("division by a non-constant expression");
          if (r.value().is_zero()) nonlinear("division by zero");
          if (r.value().is_negative()) nonlinear("negative scaling coefficient");
          if (l.is_const()) return PExpr::constant(l.value() / r.value());
          return PExpr::scale(Rational(1) / r.value(), l);
        }
        default:
          nonlinear("unsupported operator");
      }
    }
  }
  nonlinear("malformed expression");
}

namespace {

PExpr plus_one(const PExpr& e) {
  return simplify(PExpr::add(e, PExpr::constant(Rational(1))));
}

}  // namespace

Guard infer_guard(const Env& env, const ExprPtr& e) {
  if (e->kind == Expr::Kind::BinOp) {
    switch (e->op) {
      case BinOp::Ge:
        return {{{Constraint::Rel::Ge, infer_expr(env, e->lhs), infer_expr(env, e->rhs)}}};
      case BinOp::Gt:
        return {{{Constraint::Rel::Ge, infer_expr(env, e->lhs),
                  plus_one(infer_expr(env, e->rhs))}}};
      case BinOp::Eq:
        return {{{Constraint::Rel::Eq, infer_expr(env, e->lhs), infer_expr(env, e->rhs)}}};
      case BinOp::And: {
        Guard l = infer_guard(env, e->lhs);
        Guard r = infer_guard(env, e->rhs);
        l.conjuncts.insert(l.conjuncts.end(), r.conjuncts.begin(), r.conjuncts.end());
        return l;
      }
      default:
        break;
    }
  }
  // Bare integer expression in boolean position: truth means "equals 1".
  return {{{Constraint::Rel::Eq, infer_expr(env, e), PExpr::constant(Rational(1))}}};
}

std::vector<Guard> negate_guard(const Guard& g, const std::set<std::string>& boolean_syms) {
  if (g.conjuncts.size() == 1) {
    const Constraint& c = g.conjuncts.front();
    if (c.rel == Constraint::Rel::Eq && c.lhs.kind() == PExpr::Kind::Var &&
        boolean_syms.count(c.lhs.name()) && c.rhs.is_const() &&
        c.rhs.value() == Rational(1)) {
      return {{{{Constraint::Rel::Eq, c.lhs, PExpr::constant(Rational(0))}}}};
    }
  }
  std::vector<Guard> out;
  for (const Constraint& c : g.conjuncts) {
    if (c.rel == Constraint::Rel::Ge) {
      out.push_back({{{Constraint::Rel::Ge, c.rhs, plus_one(c.lhs)}}});
    } else {
      out.push_back({{{Constraint::Rel::Ge, c.lhs, plus_one(c.rhs)}}});
      out.push_back({{{Constraint::Rel::Ge, c.rhs, plus_one(c.lhs)}}});
    }
  }
  return out;
}

namespace {

class Inferencer {
 public:
  Inferencer(const Env& env, LoopBound mode) : env_(env), mode_(mode) {}

  StmtCost infer(const StmtPtr& s) {
    switch (s->kind) {
      case Stmt::Kind::Empty:
        return {PExpr::constant(Rational(0)), {}, {}};
      case Stmt::Kind::Call: {
        StmtCost rest = infer(s->cont);
        rest.direct = simplify(PExpr::add(service_cost(s->service), rest.direct));
        return rest;
      }
      case Stmt::Kind::IfExp:
        return infer_if_exp(s);
      case Stmt::Kind::IfCall:
        return infer_if_call(s);
      case Stmt::Kind::For:
        return infer_for(s);
    }
    throw InferError(InferError::Kind::NotInteger, "malformed statement");
  }

  // Deterministic signature order: counters outermost-first, then parameters
  // in declaration order, then services in first-use order.
  std::vector<std::string> order_symbols(const std::set<std::string>& vars) const {
    std::vector<std::string> out;
    for (const auto& c : counter_stack_)
      if (vars.count(c)) out.push_back(c);
    for (const auto& [name, sym] : env_.params)
      if (vars.count(sym) && std::find(out.begin(), out.end(), sym) == out.end())
        out.push_back(sym);
    for (const auto& [name, sym] : env_.services)
      if (vars.count(sym) && std::find(out.begin(), out.end(), sym) == out.end())
        out.push_back(sym);
    // Anything left (cannot happen for inferred programs) keeps set order.
    for (const auto& v : vars)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
  }

 private:
  PExpr service_cost(const std::string& name) const {
    auto sym = env_.service_symbol(name);
    if (!sym) throw InferError(InferError::Kind::NotInteger, "unknown service " + name);
    return PExpr::var(*sym);
  }

  std::string fresh_head(const char* prefix, int line, int column) {
    std::string name = std::string(prefix) + "_" + std::to_string(line);
    if (!used_heads_.insert(name).second) {
      name += "_" + std::to_string(column);
      used_heads_.insert(name);
    }
    return name;
  }

  static void collect_call_vars(const std::vector<CostCall>& calls,
                                std::set<std::string>& out) {
    for (const auto& call : calls)
      for (const auto& a : call.args) a.collect_vars(out);
  }

  static std::vector<PExpr> var_args(const std::vector<std::string>& symbols) {
    std::vector<PExpr> args;
    args.reserve(symbols.size());
    for (const auto& s : symbols) args.push_back(PExpr::var(s));
    return args;
  }

  StmtCost infer_if_exp(const StmtPtr& s) {
    Guard phi = infer_guard(env_, s->guard);
    StmtCost then_c = infer(s->then_branch);
    StmtCost else_c = infer(s->else_branch);

    std::set<std::string> vars;
    for (const auto& c : phi.conjuncts) {
      c.lhs.collect_vars(vars);
      c.rhs.collect_vars(vars);
    }
    then_c.direct.collect_vars(vars);
    else_c.direct.collect_vars(vars);
    collect_call_vars(then_c.calls, vars);
    collect_call_vars(else_c.calls, vars);
    std::vector<std::string> signature = order_symbols(vars);

    std::string head = fresh_head("if", s->line, s->column);
    std::vector<CostEquation> eqs;
    eqs.push_back({head, signature, then_c.direct, then_c.calls, phi});
    for (const Guard& neg : negate_guard(phi, env_.boolean_params))
      eqs.push_back({head, signature, else_c.direct, else_c.calls, neg});
    eqs.insert(eqs.end(), then_c.equations.begin(), then_c.equations.end());
    eqs.insert(eqs.end(), else_c.equations.begin(), else_c.equations.end());

    return {PExpr::constant(Rational(0)),
            {CostCall{head, var_args(signature)}},
            std::move(eqs)};
  }

  StmtCost infer_if_call(const StmtPtr& s) {
    StmtCost then_c = infer(s->then_branch);
    StmtCost else_c = infer(s->else_branch);
    // Branch selection is unknowable before the call returns, so the direct
    // cost over-approximates: cost of the guard service plus the max of the
    // branch directs, with both branches' calls retained.
    PExpr direct = simplify(PExpr::add(
        service_cost(s->service), PExpr::max_of({then_c.direct, else_c.direct})));
    std::vector<CostCall> calls = std::move(then_c.calls);
    calls.insert(calls.end(), else_c.calls.begin(), else_c.calls.end());
    std::vector<CostEquation> eqs = std::move(then_c.equations);
    eqs.insert(eqs.end(), else_c.equations.begin(), else_c.equations.end());
    return {std::move(direct), std::move(calls), std::move(eqs)};
  }

  StmtCost infer_for(const StmtPtr& s) {
    PExpr bound = simplify(infer_expr(env_, s->bound));
    counter_stack_.push_back(s->counter);
    StmtCost body = infer(s->body);
    PExpr counter = PExpr::var(s->counter);

    std::set<std::string> vars;
    bound.collect_vars(vars);
    body.direct.collect_vars(vars);
    collect_call_vars(body.calls, vars);
    vars.erase(s->counter);
    counter_stack_.pop_back();
    std::vector<std::string> rest = order_symbols(vars);

    std::vector<std::string> signature;
    signature.push_back(s->counter);
    signature.insert(signature.end(), rest.begin(), rest.end());

    std::string head = fresh_head("for", s->line, s->column);

    std::vector<PExpr> recur_args;
    recur_args.push_back(plus_one(counter));
    for (const auto& r : rest) recur_args.push_back(PExpr::var(r));

    std::vector<CostCall> recur_calls = body.calls;
    recur_calls.push_back({head, recur_args});

    Guard recur_guard, stop_guard;
    if (mode_ == LoopBound::Exclusive) {
      recur_guard = {{{Constraint::Rel::Ge, bound, plus_one(counter)}}};
      stop_guard = {{{Constraint::Rel::Ge, counter, bound}}};
    } else {
      recur_guard = {{{Constraint::Rel::Ge, bound, counter}}};
      stop_guard = {{{Constraint::Rel::Ge, counter, plus_one(bound)}}};
    }

    std::vector<CostEquation> eqs;
    eqs.push_back({head, signature, body.direct, recur_calls, recur_guard});
    eqs.push_back({head, signature, PExpr::constant(Rational(0)), {}, stop_guard});
    eqs.insert(eqs.end(), body.equations.begin(), body.equations.end());

    std::vector<PExpr> entry_args;
    entry_args.push_back(PExpr::constant(Rational(0)));
    for (const auto& r : rest) entry_args.push_back(PExpr::var(r));

    return {PExpr::constant(Rational(0)),
            {CostCall{head, std::move(entry_args)}},
            std::move(eqs)};
  }

  const Env& env_;
  LoopBound mode_;
  std::vector<std::string> counter_stack_;
  std::set<std::string> used_heads_;
};

}  // namespace

StmtCost infer_stmt(const Env& env, const StmtPtr& s, LoopBound mode) {
  return Inferencer(env, mode).infer(s);
}

InferenceResult infer_function(const minisl::FunctionDef& fn,
                               const std::map<std::string, std::string>& symbol_overrides,
                               LoopBound mode) {
  Env env = build_env(fn, symbol_overrides);
  Inferencer inf(env, mode);
  StmtCost body = inf.infer(fn.body);

  // Entry signature: every symbol that actually occurs in a cost or a
  // call argument; unused parameters are dropped.
  std::set<std::string> vars;
  body.direct.collect_vars(vars);
  for (const auto& call : body.calls)
    for (const auto& a : call.args) a.collect_vars(vars);
  std::vector<std::string> signature = inf.order_symbols(vars);

  CostProgram program;
  program.equations.push_back({"main", signature, body.direct, body.calls, Guard{}});
  program.equations.insert(program.equations.end(), body.equations.begin(),
                           body.equations.end());
  return {std::move(program), std::move(env)};
}

}  // namespace capp::cost
