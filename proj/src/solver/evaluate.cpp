#include <algorithm>

#include "capp/solver/solver.hpp"

namespace capp::solver {

using cost::CostEquation;
using cost::CostProgram;
using cost::PExpr;

namespace {

class Evaluator {
 public:
  Evaluator(const CostProgram& p, long long fuel) : fuel_(fuel) {
    for (const auto& eq : p.equations) groups_[eq.head].push_back(&eq);
  }

  Rational call(const std::string& head, const std::vector<Rational>& args) {
    if (fuel_-- <= 0) throw FuelExhausted();
    auto it = groups_.find(head);
    if (it == groups_.end())
      throw UnsupportedShape("call to undefined cost function " + head);

    std::optional<Rational> best;
    for (const CostEquation* eq : it->second) {
      if (eq->params.size() != args.size())
        throw UnsupportedShape("arity mismatch calling " + head);
      std::map<std::string, Rational> env;
      for (size_t i = 0; i < args.size(); ++i) env[eq->params[i]] = args[i];
      auto sat = satisfied(eq->guard, env);
      if (!sat || !*sat) continue;
      Rational v = *evaluate(eq->direct, env);
      for (const auto& c : eq->calls) {
        std::vector<Rational> sub_args;
        sub_args.reserve(c.args.size());
        for (const auto& a : c.args) sub_args.push_back(*evaluate(a, env));
        v += call(c.callee, sub_args);
      }
      if (!best || v > *best) best = v;
    }
    if (!best) {
      unmatched_.push_back(head);
      return Rational(0);
    }
    return *best;
  }

  std::vector<std::string> take_unmatched() { return std::move(unmatched_); }

 private:
  std::map<std::string, std::vector<const CostEquation*>> groups_;
  std::vector<std::string> unmatched_;
  long long fuel_;
};

}  // namespace

EvalResult evaluate_concrete(const CostProgram& p, const Binding& b, long long fuel) {
  if (p.equations.empty()) throw UnsupportedShape("empty program");
  const CostEquation& entry = p.entry();
  std::vector<Rational> args;
  args.reserve(entry.params.size());
  for (const auto& param : entry.params) {
    auto it = b.find(param);
    if (it == b.end())
      throw UnsupportedShape("no binding for entry parameter " + param);
    args.push_back(it->second);
  }
  Evaluator ev(p, fuel);
  Rational value = ev.call(entry.head, args);
  return {value, ev.take_unmatched()};
}

long long sufficient_fuel(const CostProgram& p, const Binding& b) {
  // Product over the loop heads' attainable iteration counts; every other
  // equation unfolds at most once per surrounding iteration.
  long long budget = (long long)p.equations.size() + 1;
  for (const auto& eq : p.equations) {
    bool self_recursive =
        std::any_of(eq.calls.begin(), eq.calls.end(),
                    [&](const cost::CostCall& c) { return c.callee == eq.head; });
    if (!self_recursive || eq.guard.conjuncts.size() != 1) continue;
    std::map<std::string, Rational> env(b.begin(), b.end());
    auto bound = evaluate(eq.guard.conjuncts.front().lhs, env);
    long long n = bound && bound->num() > 0 && bound->is_integer() ? bound->num() : 1;
    if (budget > (1LL << 40) / (n + 2)) return 1LL << 40;
    budget *= n + 2;
  }
  return budget * (long long)(p.equations.size() + 1);
}

}  // namespace capp::solver
