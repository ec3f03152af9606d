#include <algorithm>
#include <set>

#include "capp/solver/solver.hpp"

namespace capp::solver {

using cost::Constraint;
using cost::CostCall;
using cost::CostEquation;
using cost::CostProgram;
using cost::Guard;
using cost::PExpr;

namespace {

bool is_plus_one_of(const PExpr& e, const std::string& var) {
  return e.kind() == PExpr::Kind::Add && e.lhs().kind() == PExpr::Kind::Var &&
         e.lhs().name() == var && e.rhs().is_const() && e.rhs().value() == Rational(1);
}

// Recognized loop head: a recursive equation stepping its first parameter by
// one, guarded by bound >= i+1 (exclusive) or bound >= i (inclusive), plus a
// zero-cost stop equation with the mirrored guard.
struct LoopShape {
  const CostEquation* recur;
  const CostEquation* stop;
  std::string counter;
  PExpr bound;
  bool inclusive;
};

class Solver {
 public:
  Solver(const CostProgram& p, const Binding& b) : binding_(b) {
    for (const auto& eq : p.equations) groups_[eq.head].push_back(&eq);
  }

  PExpr solve_entry(const CostEquation& entry) {
    std::vector<PExpr> args;
    args.reserve(entry.params.size());
    for (const auto& param : entry.params) {
      auto it = binding_.find(param);
      args.push_back(it == binding_.end() ? PExpr::var(param)
                                          : PExpr::constant(it->second));
    }
    return solve_call(entry.head, args);
  }

 private:
  PExpr solve_call(const std::string& head, const std::vector<PExpr>& args) {
    auto it = groups_.find(head);
    if (it == groups_.end()) throw UnsupportedShape("undefined cost function " + head);
    if (in_progress_.count(head))
      throw UnsupportedShape("recursion through " + head + " is not a counting loop");
    in_progress_.insert(head);
    PExpr result = dispatch(head, it->second, args);
    in_progress_.erase(head);
    return simplify(result);
  }

  PExpr dispatch(const std::string& head, const std::vector<const CostEquation*>& eqs,
                 const std::vector<PExpr>& args) {
    if (auto loop = match_loop(head, eqs)) return solve_loop(*loop, args);
    for (const CostEquation* eq : eqs)
      for (const auto& call : eq->calls)
        if (call.callee == head)
          throw UnsupportedShape("recursion in " + head + " is not a counting loop");
    return solve_alternatives(eqs, args);
  }

  std::map<std::string, PExpr> bind_params(const CostEquation& eq,
                                           const std::vector<PExpr>& args) const {
    if (eq.params.size() != args.size())
      throw UnsupportedShape("arity mismatch calling " + eq.head);
    std::map<std::string, PExpr> subst;
    for (size_t i = 0; i < args.size(); ++i) subst.emplace(eq.params[i], args[i]);
    return subst;
  }

  PExpr rhs_value(const CostEquation& eq, const std::map<std::string, PExpr>& subst) {
    PExpr v = substitute(eq.direct, subst);
    for (const auto& call : eq.calls) {
      std::vector<PExpr> sub_args;
      sub_args.reserve(call.args.size());
      for (const auto& a : call.args) sub_args.push_back(simplify(substitute(a, subst)));
      v = PExpr::add(v, solve_call(call.callee, sub_args));
    }
    return v;
  }

  // Guarded alternatives. Equations whose guard is decidably false are
  // dropped; if everything left is decidably true the satisfied branches are
  // taken (several satisfied alternatives collapse through max, which is
  // exact when they carry equal costs), otherwise the maximum over the
  // remaining alternatives is the upper bound.
  PExpr solve_alternatives(const std::vector<const CostEquation*>& eqs,
                           const std::vector<PExpr>& args) {
    std::vector<std::pair<const CostEquation*, std::map<std::string, PExpr>>> open;
    bool all_decided = true;
    for (const CostEquation* eq : eqs) {
      auto subst = bind_params(*eq, args);
      bool decided_false = false;
      bool decided_all = true;
      for (const auto& c : eq->guard.conjuncts) {
        PExpr l = simplify(substitute(c.lhs, subst));
        PExpr r = simplify(substitute(c.rhs, subst));
        if (l.is_const() && r.is_const()) {
          bool holds = c.rel == Constraint::Rel::Ge ? l.value() >= r.value()
                                                    : l.value() == r.value();
          if (!holds) {
            decided_false = true;
            break;
          }
        } else {
          decided_all = false;
        }
      }
      if (decided_false) continue;
      if (!decided_all) all_decided = false;
      open.emplace_back(eq, std::move(subst));
    }
    if (open.empty()) return PExpr::constant(Rational(0));
    std::vector<PExpr> values;
    values.reserve(open.size());
    for (auto& [eq, subst] : open) values.push_back(rhs_value(*eq, subst));
    (void)all_decided;  // both cases collapse through max
    return PExpr::max_of(std::move(values));
  }

  std::optional<LoopShape> match_loop(const std::string& head,
                                      const std::vector<const CostEquation*>& eqs) const {
    if (eqs.size() != 2) return std::nullopt;
    const CostEquation *recur = nullptr, *stop = nullptr;
    for (const CostEquation* eq : eqs) {
      bool self = std::any_of(eq->calls.begin(), eq->calls.end(),
                              [&](const CostCall& c) { return c.callee == head; });
      (self ? recur : stop) = eq;
    }
    if (!recur || !stop || recur->params.empty()) return std::nullopt;
    if (recur->params != stop->params) return std::nullopt;
    const std::string& counter = recur->params.front();

    // Exactly one self call, stepping (counter+1, rest unchanged).
    int self_calls = 0;
    for (const auto& call : recur->calls) {
      if (call.callee != head) continue;
      ++self_calls;
      if (call.args.size() != recur->params.size()) return std::nullopt;
      if (!is_plus_one_of(call.args[0], counter)) return std::nullopt;
      for (size_t i = 1; i < call.args.size(); ++i) {
        const PExpr& a = call.args[i];
        if (a.kind() != PExpr::Kind::Var || a.name() != recur->params[i])
          return std::nullopt;
      }
    }
    if (self_calls != 1) return std::nullopt;

    if (recur->guard.conjuncts.size() != 1 || stop->guard.conjuncts.size() != 1)
      return std::nullopt;
    const Constraint& rg = recur->guard.conjuncts.front();
    const Constraint& sg = stop->guard.conjuncts.front();
    if (rg.rel != Constraint::Rel::Ge || sg.rel != Constraint::Rel::Ge)
      return std::nullopt;
    if (!stop->direct.is_zero() || !stop->calls.empty()) return std::nullopt;

    LoopShape shape;
    shape.recur = recur;
    shape.stop = stop;
    shape.counter = counter;
    shape.bound = rg.lhs;
    if (shape.bound.contains_var(counter)) return std::nullopt;
    if (is_plus_one_of(rg.rhs, counter)) {
      shape.inclusive = false;  // recur while bound >= i+1
      if (!(sg.lhs == PExpr::var(counter)) || !(sg.rhs == shape.bound))
        return std::nullopt;
    } else if (rg.rhs == PExpr::var(counter)) {
      shape.inclusive = true;  // recur while bound >= i
      if (!(sg.lhs == PExpr::var(counter)) ||
          !(simplify(sg.rhs) == simplify(PExpr::add(shape.bound, PExpr::constant(Rational(1))))))
        return std::nullopt;
    } else {
      return std::nullopt;
    }
    return shape;
  }

  PExpr solve_loop(const LoopShape& loop, const std::vector<PExpr>& args) {
    auto subst = bind_params(*loop.recur, args);
    subst.erase(loop.counter);  // the counter stays free inside the body

    PExpr body = substitute(loop.recur->direct, subst);
    for (const auto& call : loop.recur->calls) {
      if (call.callee == loop.recur->head) continue;
      std::vector<PExpr> sub_args;
      sub_args.reserve(call.args.size());
      for (const auto& a : call.args) sub_args.push_back(simplify(substitute(a, subst)));
      body = PExpr::add(body, solve_call(call.callee, sub_args));
    }
    body = simplify(body);
    if (body.contains_var(loop.counter))
      throw UnsupportedShape("per-iteration cost of " + loop.recur->head +
                             " depends on its counter");

    const PExpr& start = args.front();
    PExpr count = PExpr::sub(substitute(loop.bound, subst), start);
    if (loop.inclusive) count = PExpr::add(count, PExpr::constant(Rational(1)));
    count = simplify(count);
    if (count.is_const() && !(count.value() > Rational(0)))
      return PExpr::constant(Rational(0));  // empty range, not an error
    return PExpr::mul(count, body);
  }

  std::map<std::string, std::vector<const CostEquation*>> groups_;
  std::set<std::string> in_progress_;
  const Binding& binding_;
};

}  // namespace

PExpr solve_symbolic(const CostProgram& p, const Binding& b) {
  if (p.equations.empty()) throw UnsupportedShape("empty program");
  Solver solver(p, b);
  return solver.solve_entry(p.entry());
}

PExpr instantiate(const PExpr& e, const Binding& b) {
  std::map<std::string, PExpr> subst;
  for (const auto& [name, value] : b) subst.emplace(name, PExpr::constant(value));
  return simplify(substitute(e, subst));
}

}  // namespace capp::solver
