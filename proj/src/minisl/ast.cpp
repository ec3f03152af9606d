#include "capp/minisl/ast.hpp"

namespace capp::minisl {

ExprPtr Expr::int_lit(long long v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::IntLit;
  e->value = v;
  return e;
}

ExprPtr Expr::counter_ref(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::CounterRef;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::param_ref(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::ParamRef;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::bin_op(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::BinOp;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool is_boolean_op(BinOp op) {
  switch (op) {
    case BinOp::Gt:
    case BinOp::Eq:
    case BinOp::Ge:
    case BinOp::And:
      return true;
    default:
      return false;
  }
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Gt: return ">";
    case BinOp::Eq: return "==";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
  }
  return "?";
}

StmtPtr Stmt::empty() {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Empty;
  return s;
}

StmtPtr Stmt::call(std::string service, std::vector<ExprPtr> args, StmtPtr cont) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Call;
  s->service = std::move(service);
  s->args = std::move(args);
  s->cont = cont ? std::move(cont) : empty();
  return s;
}

StmtPtr Stmt::if_exp(ExprPtr guard, StmtPtr then_b, StmtPtr else_b, int line, int column) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::IfExp;
  s->guard = std::move(guard);
  s->then_branch = std::move(then_b);
  s->else_branch = std::move(else_b);
  s->line = line;
  s->column = column;
  return s;
}

StmtPtr Stmt::if_call(std::string service, std::vector<ExprPtr> args, StmtPtr then_b,
                      StmtPtr else_b, int line, int column) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::IfCall;
  s->service = std::move(service);
  s->args = std::move(args);
  s->then_branch = std::move(then_b);
  s->else_branch = std::move(else_b);
  s->line = line;
  s->column = column;
  return s;
}

StmtPtr Stmt::for_loop(std::string counter, ExprPtr bound, StmtPtr body, int line, int column) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::For;
  s->counter = std::move(counter);
  s->bound = std::move(bound);
  s->body = std::move(body);
  s->line = line;
  s->column = column;
  return s;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::IntLit: return a->value == b->value;
    case Expr::Kind::CounterRef:
    case Expr::Kind::ParamRef: return a->name == b->name;
    case Expr::Kind::BinOp:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

static bool equal_args(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

bool equal(const StmtPtr& a, const StmtPtr& b, bool compare_lines) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (compare_lines && (a->line != b->line)) return false;
  switch (a->kind) {
    case Stmt::Kind::Empty:
      return true;
    case Stmt::Kind::Call:
      return a->service == b->service && equal_args(a->args, b->args) &&
             equal(a->cont, b->cont, compare_lines);
    case Stmt::Kind::IfExp:
      return equal(a->guard, b->guard) &&
             equal(a->then_branch, b->then_branch, compare_lines) &&
             equal(a->else_branch, b->else_branch, compare_lines);
    case Stmt::Kind::IfCall:
      return a->service == b->service && equal_args(a->args, b->args) &&
             equal(a->then_branch, b->then_branch, compare_lines) &&
             equal(a->else_branch, b->else_branch, compare_lines);
    case Stmt::Kind::For:
      return a->counter == b->counter && equal(a->bound, b->bound) &&
             equal(a->body, b->body, compare_lines);
  }
  return false;
}

bool equal(const FunctionDef& a, const FunctionDef& b, bool compare_lines) {
  return a.params == b.params && a.tag == b.tag && equal(a.body, b.body, compare_lines);
}

}  // namespace capp::minisl
