#include "capp/minisl/wellformed.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace capp::minisl {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha((unsigned char)s[0]) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

bool contains_boolean_op(const ExprPtr& e) {
  if (!e || e->kind != Expr::Kind::BinOp) return false;
  return is_boolean_op(e->op) || contains_boolean_op(e->lhs) || contains_boolean_op(e->rhs);
}

class Checker {
 public:
  explicit Checker(const FunctionDef& fn) : fn_(fn) {}

  std::vector<Diagnostic> run() {
    walk(fn_.body, 0);
    return std::move(diags_);
  }

 private:
  void report(int line, std::string msg) {
    diags_.push_back({Severity::Error, line, 0, std::move(msg)});
  }

  void check_expr(const ExprPtr& e, int line) {
    if (!e) return;
    switch (e->kind) {
      case Expr::Kind::IntLit:
        return;
      case Expr::Kind::CounterRef:
        if (std::find(counters_.begin(), counters_.end(), e->name) == counters_.end())
          report(line, "unbound counter " + e->name);
        return;
      case Expr::Kind::ParamRef:
        if (std::find(fn_.params.begin(), fn_.params.end(), e->name) == fn_.params.end())
          report(line, "unbound parameter " + e->name);
        return;
      case Expr::Kind::BinOp:
        check_expr(e->lhs, line);
        check_expr(e->rhs, line);
        return;
    }
  }

  void check_service(const std::string& name, int line) {
    if (!valid_identifier(name)) report(line, "invalid service name '" + name + "'");
  }

  void walk(const StmtPtr& s, int line) {
    if (!s) return;
    switch (s->kind) {
      case Stmt::Kind::Empty:
        return;
      case Stmt::Kind::Call:
        check_service(s->service, line);
        for (const auto& a : s->args) check_expr(a, line);
        walk(s->cont, line);
        return;
      case Stmt::Kind::IfExp:
        check_expr(s->guard, s->line);
        walk(s->then_branch, s->line);
        walk(s->else_branch, s->line);
        return;
      case Stmt::Kind::IfCall:
        check_service(s->service, s->line);
        for (const auto& a : s->args) check_expr(a, s->line);
        walk(s->then_branch, s->line);
        walk(s->else_branch, s->line);
        return;
      case Stmt::Kind::For: {
        if (std::find(counters_.begin(), counters_.end(), s->counter) != counters_.end())
          report(s->line, "counter " + s->counter + " shadows live counter");
        else if (std::find(fn_.params.begin(), fn_.params.end(), s->counter) !=
                 fn_.params.end())
          report(s->line, "counter " + s->counter + " shadows parameter");
        if (contains_boolean_op(s->bound))
          report(s->line, "loop bound must be an integer expression");
        check_expr(s->bound, s->line);
        counters_.push_back(s->counter);
        walk(s->body, s->line);
        counters_.pop_back();
        return;
      }
    }
  }

  const FunctionDef& fn_;
  std::vector<std::string> counters_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> check_wellformed(const FunctionDef& fn) {
  return Checker(fn).run();
}

}  // namespace capp::minisl
