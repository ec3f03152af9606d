#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "capp/rational.hpp"

namespace capp::cost {

// Linear arithmetic expression with max: variables, nonnegative rational
// constants, +, -, constant scaling, and k-ary max. A general product node
// exists for solved closed forms (iteration count times body cost); it never
// appears inside equations or guards.
class PExpr {
 public:
  enum class Kind { Var, Const, Add, Sub, Scale, Mul, Max };

  PExpr() : PExpr(constant(Rational(0))) {}

  static PExpr var(std::string name);
  static PExpr constant(Rational value);
  static PExpr add(PExpr lhs, PExpr rhs);
  static PExpr sub(PExpr lhs, PExpr rhs);
  static PExpr scale(Rational coeff, PExpr operand);
  static PExpr mul(PExpr lhs, PExpr rhs);  // folds to scale() when a side is constant
  static PExpr max_of(std::vector<PExpr> args);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }        // Var
  const Rational& value() const { return node_->value; }         // Const / Scale coeff
  const PExpr& lhs() const { return node_->children[0]; }        // Add/Sub/Mul
  const PExpr& rhs() const { return node_->children[1]; }        // Add/Sub/Mul
  const PExpr& operand() const { return node_->children[0]; }    // Scale
  const std::vector<PExpr>& args() const { return node_->children; }  // Max

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const { return is_const() && value().is_zero(); }

  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  bool contains_var(const std::string& name) const;

  friend bool operator==(const PExpr& a, const PExpr& b);
  friend bool operator!=(const PExpr& a, const PExpr& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    Rational value;
    std::vector<PExpr> children;
  };
  explicit PExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Canonical simplification: constant folding, dropping additive/
// multiplicative units, collapsing nested scales, flattening and
// deduplicating max. Order-preserving (no re-sorting of operands).
PExpr simplify(const PExpr& e);

PExpr substitute(const PExpr& e, const std::map<std::string, PExpr>& subst);

// Numeric evaluation; nullopt if a free variable has no entry.
std::optional<Rational> evaluate(const PExpr& e, const std::map<std::string, Rational>& env);

// Renders the expression. Binary +/- are spaced except inside call/max
// argument lists and guard sides (`tight`); products always print without
// spaces. `to_text` parenthesizes by precedence only.
std::string to_text(const PExpr& e, bool tight = false);

struct Constraint {
  enum class Rel { Ge, Eq };
  Rel rel;
  PExpr lhs;
  PExpr rhs;
  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.rel == b.rel && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

// Conjunction of linear constraints; an empty list is `true`.
struct Guard {
  std::vector<Constraint> conjuncts;
  bool is_true() const { return conjuncts.empty(); }
  friend bool operator==(const Guard& a, const Guard& b) {
    return a.conjuncts == b.conjuncts;
  }
};

std::string to_text(const Constraint& c);
std::string to_text(const Guard& g);  // "[a >= b, c = d]"; "[]" when true

// Satisfaction under a full valuation; nullopt when some variable is free.
std::optional<bool> satisfied(const Constraint& c, const std::map<std::string, Rational>& env);
std::optional<bool> satisfied(const Guard& g, const std::map<std::string, Rational>& env);

}  // namespace capp::cost
