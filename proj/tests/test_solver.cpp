#include <doctest.h>

#include <fstream>
#include <sstream>

#include "capp/cost/infer.hpp"
#include "capp/cost/text_format.hpp"
#include "capp/minisl/parser.hpp"
#include "capp/solver/solver.hpp"

using namespace capp;
using namespace capp::cost;
using namespace capp::solver;
using capp::minisl::parse_function;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CostProgram listing_program(const std::string& name,
                            const std::map<std::string, std::string>& symbols) {
  return infer_function(parse_function(read_data(name)), symbols).program;
}

const std::map<std::string, std::string> kL1 = {
    {"isPremiumUser", "u"}, {"PremiumService", "P"}, {"BasicService", "B"}};
const std::map<std::string, std::string> kL2 = {
    {"IsPremiumUser", "K"}, {"PremiumService", "P"}, {"BasicService", "B"}};
const std::map<std::string, std::string> kL3 = {{"Map", "M"}, {"Reduce", "R"}};

// Two hand-written equations with structural recursion on a decrement; the
// pattern solver must refuse it while the unfolder handles it fine.
const char* kCountdown =
    "f(N,M) = M + f(N-1,M) [N >= 1]\n"
    "f(N,M) = 0 [N = 0]\n";

}  // namespace

TEST_CASE("unfolding the nested-loop program matches the closed form") {
  CostProgram p = listing_program("listing3.msl", kL3);
  Binding b = {{"m", 2}, {"r", 3}, {"M", 10}, {"R", 1}};
  auto result = evaluate_concrete(p, b);
  CHECK(result.value == Rational(26));  // 2 * (10 + 3 * 1)
  CHECK(result.unmatched_calls.empty());
}

TEST_CASE("countdown program evaluates by unfolding") {
  CostProgram p = parse_program(kCountdown);
  CHECK(evaluate_concrete(p, {{"N", 0}, {"M", 5}}).value == Rational(0));
  CHECK(evaluate_concrete(p, {{"N", 3}, {"M", 5}}).value == Rational(15));
}

TEST_CASE("guard selection picks the satisfied branch") {
  CostProgram p = listing_program("listing1.msl", kL1);
  CHECK(evaluate_concrete(p, {{"u", 1}, {"P", 7}, {"B", 4}}).value == Rational(7));
  CHECK(evaluate_concrete(p, {{"u", 0}, {"P", 7}, {"B", 4}}).value == Rational(4));
}

TEST_CASE("overlapping guards resolve to the maximum alternative") {
  CostProgram p = parse_program(
      "g(N,A,B) = A [N >= 0]\n"
      "g(N,A,B) = B [0 >= N]\n");
  CHECK(evaluate_concrete(p, {{"N", 0}, {"A", 3}, {"B", 9}}).value == Rational(9));
  CHECK(evaluate_concrete(p, {{"N", 2}, {"A", 3}, {"B", 9}}).value == Rational(3));
}

TEST_CASE("calls with no satisfied guard contribute zero and are reported") {
  CostProgram p = listing_program("listing1.msl", kL1);
  auto result = evaluate_concrete(p, {{"u", 5}, {"P", 7}, {"B", 4}});
  CHECK(result.value == Rational(0));
  REQUIRE(result.unmatched_calls.size() == 1);
  CHECK(result.unmatched_calls[0] == "if_2");
}

TEST_CASE("fuel bounds the unfolding") {
  CostProgram p = parse_program(kCountdown);
  CHECK_THROWS_AS(evaluate_concrete(p, {{"N", 100}, {"M", 1}}, 10), FuelExhausted);
}

TEST_CASE("symbolic solutions of the worked examples") {
  CostProgram l1 = listing_program("listing1.msl", kL1);
  CHECK(to_text(solve_symbolic(l1, {})) == "max(P,B)");
  CHECK(to_text(solve_symbolic(l1, {{"u", 1}})) == "P");
  CHECK(to_text(solve_symbolic(l1, {{"u", 0}})) == "B");

  CostProgram l2 = listing_program("listing2.msl", kL2);
  CHECK(to_text(solve_symbolic(l2, {})) == "K + max(P,B)");

  CostProgram l3 = listing_program("listing3.msl", kL3);
  CHECK(to_text(solve_symbolic(l3, {})) == "m*(M + r*R)");
  CHECK(to_text(solve_symbolic(l3, {{"m", 2}})) == "2*(M + r*R)");
  CHECK(solve_symbolic(l3, {{"m", 0}}).is_zero());
}

TEST_CASE("loop collapse handles constant and empty ranges") {
  auto fn = parse_function("( ) => { for(i in range(0, 4)) { call A( ) } }");
  CostProgram p = infer_function(fn).program;
  CHECK(to_text(solve_symbolic(p, {})) == "4*A");
  auto empty = parse_function("( ) => { for(i in range(0, 0)) { call A( ) } }");
  CHECK(solve_symbolic(infer_function(empty).program, {}).is_zero());
}

TEST_CASE("non-counting recursion is rejected by the pattern solver") {
  CHECK_THROWS_AS(solve_symbolic(parse_program(kCountdown), {}), UnsupportedShape);
}

TEST_CASE("counter-dependent iteration costs are rejected") {
  // The inner bound depends on the outer counter, so the per-iteration cost
  // is not uniform and no product form exists.
  auto fn = parse_function(
      "( m ) => { for(i in range(0, m)) { for(j in range(0, i)) { call A( ) } } }");
  CostProgram p = infer_function(fn).program;
  CHECK_THROWS_AS(solve_symbolic(p, {}), UnsupportedShape);
  // The unfolder still handles it.
  CHECK(evaluate_concrete(p, {{"m", 4}, {"A", 2}}).value == Rational(12));  // 2*(0+1+2+3)
}

TEST_CASE("instantiation substitutes and simplifies") {
  PExpr max_pb = parse_pexpr("max(P,B)");
  CHECK(instantiate(max_pb, {{"P", 12}, {"B", 30}}) == PExpr::constant(Rational(30)));

  PExpr mapreduce = parse_pexpr("m*(M + r*R)");
  CHECK(instantiate(mapreduce, {{"m", 2}, {"r", 3}, {"M", 10}, {"R", 1}}) ==
        PExpr::constant(Rational(26)));

  PExpr partial = instantiate(parse_pexpr("K + max(P,B)"), {{"K", 5}});
  CHECK(to_text(partial) == "5 + max(P,B)");
}

TEST_CASE("interchange export of the countdown program") {
  CHECK(export_interchange(parse_program(kCountdown)) ==
        "eq(f(N,M), nat(M), [f(N-1,M)], [N >= 1]).\n"
        "eq(f(N,M), 0, [], [N = 0]).\n");
}

TEST_CASE("interchange export of an empty program") {
  CHECK(export_interchange(parse_program("main() = 0 []\n")) == "eq(main, 0, [], []).\n");
}

TEST_CASE("a max in a direct cost exports as one clause per branch") {
  CostProgram l2 = listing_program("listing2.msl", kL2);
  CHECK(export_interchange(l2) ==
        "eq(main(K,P,B), nat(K+P), [], []).\n"
        "eq(main(K,P,B), nat(K+B), [], []).\n");
}

TEST_CASE("interchange upper-cases variables with collision suffixes") {
  CostProgram l3 = listing_program("listing3.msl", kL3);
  std::string out = export_interchange(l3);
  CHECK(out.find("eq(main(M,R,M2,R2), 0, [for_2(0,M,R,M2,R2)], []).") != std::string::npos);
  CHECK(out.find("[M >= I+1]") != std::string::npos);
}

TEST_CASE("program text round-trips through the parser") {
  for (const auto& [name, syms] :
       std::vector<std::pair<std::string, std::map<std::string, std::string>>>{
           {"listing1.msl", kL1}, {"listing2.msl", kL2}, {"listing3.msl", kL3}}) {
    CostProgram p = listing_program(name, syms);
    CHECK(parse_program(to_text(p)) == p);
  }
  CostProgram countdown = parse_program(kCountdown);
  CHECK(parse_program(to_text(countdown)) == countdown);
}

TEST_CASE("program text rejects malformed input") {
  CHECK_THROWS_AS(parse_program("main() = ["), FormatError);
  CHECK_THROWS_AS(parse_program("main() = max(g(N),1) []"), FormatError);
  CHECK_THROWS_AS(parse_program(""), FormatError);
  CHECK_THROWS_AS(parse_program("main() = 0 [x ! 1]"), FormatError);
}

TEST_CASE("decimal rendering falls back to fractions") {
  CHECK(Rational(26).to_decimal_string() == "26");
  CHECK(Rational(7, 2).to_decimal_string() == "3.5");
  CHECK(Rational(1, 3).to_decimal_string() == "1/3");
  CHECK(Rational(-3, 4).to_decimal_string() == "-0.75");
  CHECK(Rational::from_string("2.5") == Rational(5, 2));
  CHECK(Rational::from_string("5/2") == Rational(5, 2));
}
