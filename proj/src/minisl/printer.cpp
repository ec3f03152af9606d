#include "capp/minisl/printer.hpp"

#include <sstream>

namespace capp::minisl {

namespace {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::And: return 1;
    case BinOp::Gt:
    case BinOp::Eq:
    case BinOp::Ge: return 2;
    case BinOp::Add:
    case BinOp::Sub: return 3;
    case BinOp::Mul:
    case BinOp::Div: return 4;
  }
  return 0;
}

void render(std::ostream& os, const ExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case Expr::Kind::IntLit:
      os << e->value;
      return;
    case Expr::Kind::CounterRef:
    case Expr::Kind::ParamRef:
      os << e->name;
      return;
    case Expr::Kind::BinOp: {
      int prec = precedence(e->op);
      bool parens = prec < parent_prec;
      if (parens) os << "(";
      bool nonassoc = is_boolean_op(e->op) && e->op != BinOp::And;
      render(os, e->lhs, nonassoc ? prec + 1 : prec);
      os << " " << to_string(e->op) << " ";
      render(os, e->rhs, prec + 1);
      if (parens) os << ")";
      return;
    }
  }
}

void render_args(std::ostream& os, const std::vector<ExprPtr>& args) {
  os << "( ";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    render(os, args[i], 0);
  }
  os << (args.empty() ? ")" : " )");
}

void render_stmt(std::ostream& os, const StmtPtr& s, int depth) {
  std::string pad(2 * depth, ' ');
  switch (s->kind) {
    case Stmt::Kind::Empty:
      return;
    case Stmt::Kind::Call:
      os << pad << "call " << s->service;
      render_args(os, s->args);
      os << "\n";
      render_stmt(os, s->cont, depth);
      return;
    case Stmt::Kind::IfExp:
      os << pad << "if( ";
      render(os, s->guard, 0);
      os << " ) {\n";
      render_stmt(os, s->then_branch, depth + 1);
      os << pad << "} else {\n";
      render_stmt(os, s->else_branch, depth + 1);
      os << pad << "}\n";
      return;
    case Stmt::Kind::IfCall:
      os << pad << "if( call " << s->service;
      render_args(os, s->args);
      os << " ) {\n";
      render_stmt(os, s->then_branch, depth + 1);
      os << pad << "} else {\n";
      render_stmt(os, s->else_branch, depth + 1);
      os << pad << "}\n";
      return;
    case Stmt::Kind::For:
      os << pad << "for(" << s->counter << " in range(0, ";
      render(os, s->bound, 0);
      os << ")) {\n";
      render_stmt(os, s->body, depth + 1);
      os << pad << "}\n";
      return;
  }
}

}  // namespace

std::string to_source(const FunctionDef& fn) {
  std::ostringstream os;
  if (!fn.tag.empty()) os << "// tag: " << fn.tag << "\n";
  os << "( ";
  for (size_t i = 0; i < fn.params.size(); ++i) {
    if (i) os << ", ";
    os << fn.params[i];
  }
  os << (fn.params.empty() ? ") => {\n" : " ) => {\n");
  render_stmt(os, fn.body, 1);
  os << "}\n";
  return os.str();
}

std::string to_source(const ExprPtr& expr) {
  std::ostringstream os;
  render(os, expr, 0);
  return os.str();
}

}  // namespace capp::minisl
