#include <doctest.h>

#include "capp/cost/infer.hpp"
#include "capp/cost/text_format.hpp"
#include "capp/minisl/printer.hpp"
#include "capp/minisl/wellformed.hpp"
#include "capp/solver/solver.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace capp;
using namespace capp::cost;
using namespace capp::solver;

namespace {

struct Sample {
  minisl::FunctionDef fn;
  InferenceResult inferred;
  Binding binding;  // full: parameters and services
};

// Boolean-typed parameters draw from {0, 1}; everything else from [0, 20].
Binding random_binding(const InferenceResult& inferred, std::mt19937_64& rng) {
  Binding b;
  for (const auto& [name, sym] : inferred.env.params)
    b[sym] = inferred.env.boolean_params.count(sym) ? Rational((long long)(rng() % 2))
                                                    : Rational((long long)(rng() % 21));
  for (const auto& [name, sym] : inferred.env.services)
    b[sym] = Rational((long long)(rng() % 21));
  return b;
}

Sample random_sample(testsupport::FunctionGenerator& gen, std::mt19937_64& rng) {
  Sample s;
  s.fn = gen();
  s.inferred = infer_function(s.fn);
  s.binding = random_binding(s.inferred, rng);
  return s;
}

Rational oracle_cost(const Sample& s) {
  testsupport::Scope params;
  std::map<std::string, Rational> latency;
  for (const auto& [name, sym] : s.inferred.env.params) params[name] = s.binding.at(sym);
  for (const auto& [name, sym] : s.inferred.env.services) latency[name] = s.binding.at(sym);
  return testsupport::function_cost(s.fn, params, latency);
}

bool has_guarded_selection(const CostProgram& p) {
  for (const auto& eq : p.equations)
    if (eq.head.rfind("if_", 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("unfolding agrees with the syntax-tree oracle") {
  std::mt19937_64 rng(11);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 300; ++i) {
    Sample s = random_sample(gen, rng);
    CAPTURE(minisl::to_source(s.fn));
    Rational expect = oracle_cost(s);
    auto got = evaluate_concrete(s.inferred.program, s.binding,
                                 sufficient_fuel(s.inferred.program, s.binding));
    CHECK(got.value == expect);
  }
}

TEST_CASE("solving under a full binding is exact") {
  std::mt19937_64 rng(12);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 300; ++i) {
    Sample s = random_sample(gen, rng);
    CAPTURE(minisl::to_source(s.fn));
    auto concrete = evaluate_concrete(s.inferred.program, s.binding,
                                      sufficient_fuel(s.inferred.program, s.binding));
    PExpr solved = solve_symbolic(s.inferred.program, s.binding);
    REQUIRE(solved.is_const());
    CHECK(solved.value() == concrete.value);
  }
}

TEST_CASE("the unbound solution instantiates to an upper bound, exact without selections") {
  std::mt19937_64 rng(13);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 300; ++i) {
    Sample s = random_sample(gen, rng);
    CAPTURE(minisl::to_source(s.fn));
    auto concrete = evaluate_concrete(s.inferred.program, s.binding,
                                      sufficient_fuel(s.inferred.program, s.binding));
    PExpr closed = solve_symbolic(s.inferred.program, {});
    PExpr value = instantiate(closed, s.binding);
    REQUIRE(value.is_const());
    CHECK(value.value() >= concrete.value);
    if (!has_guarded_selection(s.inferred.program))
      CHECK(value.value() == concrete.value);
  }
}

TEST_CASE("partial bindings stay above fuller ones") {
  std::mt19937_64 rng(14);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 150; ++i) {
    Sample s = random_sample(gen, rng);
    // Keep an arbitrary half of the symbols.
    Binding partial;
    size_t k = 0;
    for (const auto& [sym, value] : s.binding)
      if (k++ % 2 == 0) partial.emplace(sym, value);
    Binding rest;
    for (const auto& [sym, value] : s.binding)
      if (!partial.count(sym)) rest.emplace(sym, value);

    auto concrete = evaluate_concrete(s.inferred.program, s.binding,
                                      sufficient_fuel(s.inferred.program, s.binding));
    PExpr solved = instantiate(solve_symbolic(s.inferred.program, partial), rest);
    REQUIRE(solved.is_const());
    CHECK(solved.value() >= concrete.value);
  }
}

TEST_CASE("costs are nonnegative for nonnegative bindings") {
  std::mt19937_64 rng(15);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 200; ++i) {
    Sample s = random_sample(gen, rng);
    auto concrete = evaluate_concrete(s.inferred.program, s.binding,
                                      sufficient_fuel(s.inferred.program, s.binding));
    CHECK(concrete.value >= Rational(0));
  }
}

TEST_CASE("scaling all service costs scales the result linearly") {
  std::mt19937_64 rng(16);
  testsupport::FunctionGenerator gen(rng);
  const Rational lambdas[] = {Rational(1, 2), Rational(2), Rational(10)};
  for (int i = 0; i < 100; ++i) {
    Sample s = random_sample(gen, rng);
    auto base = evaluate_concrete(s.inferred.program, s.binding,
                                  sufficient_fuel(s.inferred.program, s.binding));
    for (const Rational& lambda : lambdas) {
      Binding scaled = s.binding;
      for (const auto& [name, sym] : s.inferred.env.services)
        scaled[sym] = s.binding.at(sym) * lambda;
      auto result = evaluate_concrete(s.inferred.program, scaled,
                                      sufficient_fuel(s.inferred.program, scaled));
      CHECK(result.value == base.value * lambda);
    }
  }
}

TEST_CASE("generated programs are structurally closed") {
  std::mt19937_64 rng(17);
  testsupport::FunctionGenerator gen(rng);
  for (int i = 0; i < 100; ++i) {
    Sample s = random_sample(gen, rng);
    CHECK(check_closed(s.inferred.program).empty());
    CHECK(parse_program(to_text(s.inferred.program)) == s.inferred.program);
  }
}

TEST_CASE("selection guards partition the integer box") {
  std::mt19937_64 rng(18);
  testsupport::FunctionGenerator gen(rng);
  int checked_groups = 0;
  for (int i = 0; i < 120; ++i) {
    Sample s = random_sample(gen, rng);
    const auto& eqs = s.inferred.program.equations;
    for (size_t k = 0; k < eqs.size(); ++k) {
      if (eqs[k].head.rfind("if_", 0) != 0) continue;
      if (k > 0 && eqs[k - 1].head == eqs[k].head) continue;  // group start only
      // Gather the group: first equation holds the positive guard, the rest
      // its negation disjuncts.
      const Guard& phi = eqs[k].guard;
      std::vector<const Guard*> negated;
      for (size_t j = k + 1; j < eqs.size() && eqs[j].head == eqs[k].head; ++j)
        negated.push_back(&eqs[j].guard);
      REQUIRE(!negated.empty());

      std::set<std::string> vars;
      auto gather = [&vars](const Guard& g) {
        for (const auto& c : g.conjuncts) {
          c.lhs.collect_vars(vars);
          c.rhs.collect_vars(vars);
        }
      };
      gather(phi);
      for (const Guard* g : negated) gather(*g);
      std::vector<std::string> var_list(vars.begin(), vars.end());
      if (var_list.size() > 4) continue;  // keep the box enumerable

      std::vector<std::vector<Rational>> domains;
      for (const auto& v : var_list) {
        if (s.inferred.env.boolean_params.count(v))
          domains.push_back({Rational(0), Rational(1)});
        else
          domains.push_back({Rational(-3), Rational(-2), Rational(-1), Rational(0),
                             Rational(1), Rational(2), Rational(3)});
      }
      std::vector<size_t> idx(var_list.size(), 0);
      bool done = var_list.empty();
      std::map<std::string, Rational> point;
      int enumerated = 0;
      while (true) {
        for (size_t d = 0; d < var_list.size(); ++d) point[var_list[d]] = domains[d][idx[d]];
        bool pos = *satisfied(phi, point);
        bool neg = false;
        for (const Guard* g : negated)
          if (*satisfied(*g, point)) neg = true;
        CHECK(pos != neg);
        ++enumerated;
        if (done) break;
        size_t d = 0;
        while (d < idx.size() && ++idx[d] == domains[d].size()) idx[d++] = 0;
        if (d == idx.size()) break;
      }
      CHECK(enumerated > 0);
      ++checked_groups;
    }
  }
  CHECK(checked_groups > 20);  // the corpus actually exercises selections
}
