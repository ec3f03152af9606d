#include "capp/cost/pexpr.hpp"

#include <algorithm>
#include <sstream>

namespace capp::cost {

PExpr PExpr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return PExpr(std::move(n));
}

PExpr PExpr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = std::move(value);
  return PExpr(std::move(n));
}

PExpr PExpr::add(PExpr lhs, PExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->children = {std::move(lhs), std::move(rhs)};
  return PExpr(std::move(n));
}

PExpr PExpr::sub(PExpr lhs, PExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sub;
  n->children = {std::move(lhs), std::move(rhs)};
  return PExpr(std::move(n));
}

PExpr PExpr::scale(Rational coeff, PExpr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scale;
  n->value = std::move(coeff);
  n->children = {std::move(operand)};
  return PExpr(std::move(n));
}

PExpr PExpr::mul(PExpr lhs, PExpr rhs) {
  if (lhs.is_const()) return scale(lhs.value(), std::move(rhs));
  if (rhs.is_const()) return scale(rhs.value(), std::move(lhs));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->children = {std::move(lhs), std::move(rhs)};
  return PExpr(std::move(n));
}

PExpr PExpr::max_of(std::vector<PExpr> args) {
  if (args.empty()) throw std::invalid_argument("max needs at least one argument");
  if (args.size() == 1) return args[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->children = std::move(args);
  return PExpr(std::move(n));
}

void PExpr::collect_vars(std::set<std::string>& out) const {
  if (kind() == Kind::Var) {
    out.insert(name());
    return;
  }
  for (const auto& c : node_->children) c.collect_vars(out);
}

std::set<std::string> PExpr::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

bool PExpr::contains_var(const std::string& v) const {
  if (kind() == Kind::Var) return name() == v;
  return std::any_of(node_->children.begin(), node_->children.end(),
                     [&](const PExpr& c) { return c.contains_var(v); });
}

bool operator==(const PExpr& a, const PExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case PExpr::Kind::Var: return a.name() == b.name();
    case PExpr::Kind::Const: return a.value() == b.value();
    case PExpr::Kind::Scale:
      if (a.value() != b.value()) return false;
      break;
    default:
      break;
  }
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  if (ca.size() != cb.size()) return false;
  for (size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

PExpr simplify(const PExpr& e) {
  switch (e.kind()) {
    case PExpr::Kind::Var:
    case PExpr::Kind::Const:
      return e;
    case PExpr::Kind::Add: {
      PExpr a = simplify(e.lhs()), b = simplify(e.rhs());
      if (a.is_const() && b.is_const()) return PExpr::constant(a.value() + b.value());
      if (a.is_zero()) return b;
      if (b.is_zero()) return a;
      return PExpr::add(a, b);
    }
    case PExpr::Kind::Sub: {
      PExpr a = simplify(e.lhs()), b = simplify(e.rhs());
      if (b.is_zero()) return a;
      if (a == b) return PExpr::constant(Rational(0));
      // Fold only when the difference stays in the nonnegative fragment.
      if (a.is_const() && b.is_const() && b.value() <= a.value())
        return PExpr::constant(a.value() - b.value());
      return PExpr::sub(a, b);
    }
    case PExpr::Kind::Scale: {
      PExpr inner = simplify(e.operand());
      const Rational& q = e.value();
      if (q.is_zero()) return PExpr::constant(Rational(0));
      if (q == Rational(1)) return inner;
      if (inner.is_const()) return PExpr::constant(q * inner.value());
      if (inner.kind() == PExpr::Kind::Scale)
        return PExpr::scale(q * inner.value(), inner.operand());
      return PExpr::scale(q, inner);
    }
    case PExpr::Kind::Mul: {
      PExpr a = simplify(e.lhs()), b = simplify(e.rhs());
      if (a.is_const() || b.is_const()) return simplify(PExpr::mul(a, b));
      return PExpr::mul(a, b);
    }
    case PExpr::Kind::Max: {
      std::vector<PExpr> flat;
      std::optional<Rational> const_arg;
      size_t const_pos = 0;
      for (const auto& raw : e.args()) {
        PExpr s = simplify(raw);
        std::vector<PExpr> expanded =
            s.kind() == PExpr::Kind::Max ? s.args() : std::vector<PExpr>{s};
        for (auto& arg : expanded) {
          if (arg.is_const()) {
            if (!const_arg) {
              const_arg = arg.value();
              const_pos = flat.size();
              flat.push_back(arg);
            } else if (arg.value() > *const_arg) {
              const_arg = arg.value();
              flat[const_pos] = arg;
            }
            continue;
          }
          if (std::find(flat.begin(), flat.end(), arg) == flat.end())
            flat.push_back(std::move(arg));
        }
      }
      return PExpr::max_of(std::move(flat));
    }
  }
  return e;
}

PExpr substitute(const PExpr& e, const std::map<std::string, PExpr>& subst) {
  switch (e.kind()) {
    case PExpr::Kind::Var: {
      auto it = subst.find(e.name());
      return it == subst.end() ? e : it->second;
    }
    case PExpr::Kind::Const:
      return e;
    case PExpr::Kind::Add:
      return PExpr::add(substitute(e.lhs(), subst), substitute(e.rhs(), subst));
    case PExpr::Kind::Sub:
      return PExpr::sub(substitute(e.lhs(), subst), substitute(e.rhs(), subst));
    case PExpr::Kind::Scale:
      return PExpr::scale(e.value(), substitute(e.operand(), subst));
    case PExpr::Kind::Mul:
      return PExpr::mul(substitute(e.lhs(), subst), substitute(e.rhs(), subst));
    case PExpr::Kind::Max: {
      std::vector<PExpr> args;
      args.reserve(e.args().size());
      for (const auto& a : e.args()) args.push_back(substitute(a, subst));
      return PExpr::max_of(std::move(args));
    }
  }
  return e;
}

std::optional<Rational> evaluate(const PExpr& e, const std::map<std::string, Rational>& env) {
  switch (e.kind()) {
    case PExpr::Kind::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case PExpr::Kind::Const:
      return e.value();
    case PExpr::Kind::Add: {
      auto a = evaluate(e.lhs(), env), b = evaluate(e.rhs(), env);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case PExpr::Kind::Sub: {
      auto a = evaluate(e.lhs(), env), b = evaluate(e.rhs(), env);
      if (!a || !b) return std::nullopt;
      return *a - *b;
    }
    case PExpr::Kind::Scale: {
      auto a = evaluate(e.operand(), env);
      if (!a) return std::nullopt;
      return e.value() * *a;
    }
    case PExpr::Kind::Mul: {
      auto a = evaluate(e.lhs(), env), b = evaluate(e.rhs(), env);
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case PExpr::Kind::Max: {
      std::optional<Rational> best;
      for (const auto& arg : e.args()) {
        auto v = evaluate(arg, env);
        if (!v) return std::nullopt;
        if (!best || *v > *best) best = *v;
      }
      return best;
    }
  }
  return std::nullopt;
}

namespace {

// Add/Sub bind loosest (1), products next (2), atoms tightest (3).
int precedence(PExpr::Kind k) {
  switch (k) {
    case PExpr::Kind::Add:
    case PExpr::Kind::Sub: return 1;
    case PExpr::Kind::Scale:
    case PExpr::Kind::Mul: return 2;
    default: return 3;
  }
}

void render(std::ostream& os, const PExpr& e, bool tight, int parent_prec) {
  int prec = precedence(e.kind());
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (e.kind()) {
    case PExpr::Kind::Var:
      os << e.name();
      break;
    case PExpr::Kind::Const:
      os << e.value().to_string();
      break;
    case PExpr::Kind::Add:
      render(os, e.lhs(), tight, prec);
      os << (tight ? "+" : " + ");
      render(os, e.rhs(), tight, prec + 1);
      break;
    case PExpr::Kind::Sub:
      render(os, e.lhs(), tight, prec);
      os << (tight ? "-" : " - ");
      render(os, e.rhs(), tight, prec + 1);
      break;
    case PExpr::Kind::Scale:
      os << e.value().to_string() << "*";
      render(os, e.operand(), tight, prec + 1);
      break;
    case PExpr::Kind::Mul:
      render(os, e.lhs(), tight, prec);
      os << "*";
      render(os, e.rhs(), tight, prec + 1);
      break;
    case PExpr::Kind::Max: {
      os << "max(";
      for (size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << ",";
        render(os, e.args()[i], true, 0);
      }
      os << ")";
      break;
    }
  }
  if (parens) os << ")";
}

}  // namespace

std::string to_text(const PExpr& e, bool tight) {
  std::ostringstream os;
  render(os, e, tight, 0);
  return os.str();
}

std::string to_text(const Constraint& c) {
  return to_text(c.lhs, true) + (c.rel == Constraint::Rel::Ge ? " >= " : " = ") +
         to_text(c.rhs, true);
}

std::string to_text(const Guard& g) {
  std::string out = "[";
  for (size_t i = 0; i < g.conjuncts.size(); ++i) {
    if (i) out += ", ";
    out += to_text(g.conjuncts[i]);
  }
  return out + "]";
}

std::optional<bool> satisfied(const Constraint& c, const std::map<std::string, Rational>& env) {
  auto l = evaluate(c.lhs, env), r = evaluate(c.rhs, env);
  if (!l || !r) return std::nullopt;
  return c.rel == Constraint::Rel::Ge ? *l >= *r : *l == *r;
}

std::optional<bool> satisfied(const Guard& g, const std::map<std::string, Rational>& env) {
  for (const auto& c : g.conjuncts) {
    auto s = satisfied(c, env);
    if (!s) return std::nullopt;
    if (!*s) return false;
  }
  return true;
}

}  // namespace capp::cost
