#pragma once

#include <memory>
#include <string>
#include <vector>

namespace capp::minisl {

// Expressions: integer literals, loop counters, invocation parameters and
// binary operations. Booleans are integer-encoded (true = 1, false = 0).
enum class BinOp { Add, Sub, Gt, Eq, Ge, And, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { IntLit, CounterRef, ParamRef, BinOp };

  Kind kind;
  long long value = 0;         // IntLit
  std::string name;            // CounterRef / ParamRef
  BinOp op = BinOp::Add;       // BinOp
  ExprPtr lhs, rhs;            // BinOp

  static ExprPtr int_lit(long long v);
  static ExprPtr counter_ref(std::string name);
  static ExprPtr param_ref(std::string name);
  static ExprPtr bin_op(BinOp op, ExprPtr lhs, ExprPtr rhs);
};

// True for the comparison/conjunction operators; expressions containing them
// are boolean-valued.
bool is_boolean_op(BinOp op);
const char* to_string(BinOp op);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

// Statements form right-nested chains: a `call` carries the rest of the
// sequence in `cont`; `if`/`for` terminate their enclosing sequence.
struct Stmt {
  enum class Kind { Empty, Call, IfExp, IfCall, For };

  Kind kind;
  std::string service;              // Call / IfCall
  std::vector<ExprPtr> args;        // Call / IfCall
  ExprPtr guard;                    // IfExp
  StmtPtr cont;                     // Call
  StmtPtr then_branch, else_branch; // IfExp / IfCall
  std::string counter;              // For
  ExprPtr bound;                    // For
  StmtPtr body;                     // For
  int line = 0;    // source line of the if/for keyword
  int column = 0;  // source column, disambiguates same-line constructs

  static StmtPtr empty();
  static StmtPtr call(std::string service, std::vector<ExprPtr> args, StmtPtr cont);
  static StmtPtr if_exp(ExprPtr guard, StmtPtr then_b, StmtPtr else_b, int line, int column);
  static StmtPtr if_call(std::string service, std::vector<ExprPtr> args, StmtPtr then_b,
                         StmtPtr else_b, int line, int column);
  static StmtPtr for_loop(std::string counter, ExprPtr bound, StmtPtr body, int line, int column);
};

struct FunctionDef {
  std::string source_name;          // from file name or caller-supplied
  std::string tag;                  // policy tag comment, empty when absent
  std::vector<std::string> params;  // pairwise distinct
  StmtPtr body;
};

// Structural equality; `compare_lines` additionally requires identical
// line/column fields on if/for nodes.
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const StmtPtr& a, const StmtPtr& b, bool compare_lines = true);
bool equal(const FunctionDef& a, const FunctionDef& b, bool compare_lines = true);

}  // namespace capp::minisl
