#include <doctest.h>

#include <random>

#include "capp/app/script.hpp"

using namespace capp;
using namespace capp::app;

namespace {

// Snippets in the loose indentation style scripts are written in.
const char* kDbQuery =
    "- db_query:\n"
    "  - workers: \n"
    "    - wrk: W1\n"
    "    - wrk: W2\n"
    "    strategy: best_first\n";

const char* kPremUser =
    "- premUser:\n"
    " - workers: \n"
    "     - wrk: W1\n"
    "     - wrk: W2\n"
    "   strategy: min_latency\n";

const char* kMapReduce =
    "- mapReduce :\n"
    "  - workers:\n"
    "    - wrk: W1\n"
    "    - wrk: W2\n"
    "  strategy: random\n"
    "  invalidate: \n"
    "    max_latency: 300\n";

}  // namespace

TEST_CASE("ordered selection policy parses") {
  CappScript s = parse_capp(kDbQuery);
  REQUIRE(s.policies.size() == 1);
  CHECK(s.policies[0].first == "db_query");
  const Policy& p = s.policies[0].second;
  REQUIRE(p.blocks.size() == 1);
  CHECK(p.blocks[0].workers == std::vector<std::string>{"W1", "W2"});
  CHECK(p.blocks[0].strategy == Strategy::BestFirst);
  CHECK(p.blocks[0].invalidate.kind == Invalidate::Kind::Overload);  // default
  CHECK(p.followup == Followup::Default);                            // default
}

TEST_CASE("cost-minimizing policy parses") {
  CappScript s = parse_capp(kPremUser);
  REQUIRE(s.policies.size() == 1);
  const Policy& p = s.policies[0].second;
  REQUIRE(p.blocks.size() == 1);
  CHECK(p.blocks[0].strategy == Strategy::MinLatency);
}

TEST_CASE("latency-threshold invalidation parses") {
  CappScript s = parse_capp(kMapReduce);
  REQUIRE(s.policies.size() == 1);
  CHECK(s.policies[0].first == "mapReduce");
  const Block& b = s.policies[0].second.blocks[0];
  CHECK(b.strategy == Strategy::Random);
  CHECK(b.invalidate.kind == Invalidate::Kind::MaxLatency);
  CHECK(b.invalidate.threshold == Rational(300));
}

TEST_CASE("wildcard worker blocks and explicit clauses") {
  CappScript s = parse_capp(
      "- default:\n"
      "  - workers: *\n"
      "    strategy: platform\n"
      "    invalidate:\n"
      "      capacity_used: 80%\n"
      "  followup: fail\n");
  const Policy& p = s.policies[0].second;
  CHECK(p.blocks[0].all_workers);
  CHECK(p.blocks[0].invalidate.kind == Invalidate::Kind::CapacityUsed);
  CHECK(p.blocks[0].invalidate.percent == 80);
  CHECK(p.followup == Followup::Fail);
}

TEST_CASE("multiple blocks keep their order") {
  CappScript s = parse_capp(
      "- tiered:\n"
      "  - workers:\n"
      "    - wrk: W1\n"
      "    invalidate:\n"
      "      max_concurrent_invocations: 2\n"
      "  - workers:\n"
      "    - wrk: W2\n"
      "    - wrk: W3\n"
      "    strategy: random\n");
  const Policy& p = s.policies[0].second;
  REQUIRE(p.blocks.size() == 2);
  CHECK(p.blocks[0].invalidate.kind == Invalidate::Kind::MaxConcurrent);
  CHECK(p.blocks[0].invalidate.max_concurrent == 2);
  CHECK(p.blocks[1].workers == std::vector<std::string>{"W2", "W3"});
}

TEST_CASE("script errors carry line numbers") {
  CHECK_THROWS_AS(parse_capp("- a:\n  - workers:\n    - wrk: W1\n- a:\n  - workers: *\n"),
                  ScriptError);  // duplicate tag
  CHECK_THROWS_AS(parse_capp("- a:\n  - workers: *\n    strategy: fastest\n"), ScriptError);
  CHECK_THROWS_AS(parse_capp("- a:\n  - workers: *\n    invalidate: sometimes\n"),
                  ScriptError);
  CHECK_THROWS_AS(parse_capp("- a:\n  followup: fail\n"), ScriptError);  // no blocks
  CHECK_THROWS_AS(parse_capp("- a:\n  - workers:\n"), ScriptError);      // empty workers
  CHECK_THROWS_AS(parse_capp("- a:\n  - workers: *\n    invalidate:\n      capacity_used: 150%\n"),
                  ScriptError);
  CHECK_THROWS_AS(parse_capp("strategy: random\n"), ScriptError);  // outside a policy
}

TEST_CASE("canonical serialization round-trips") {
  for (const char* text : {kDbQuery, kPremUser, kMapReduce}) {
    CappScript s = parse_capp(text);
    std::string canonical = serialize(s);
    CHECK(parse_capp(canonical) == s);
    CHECK(serialize(parse_capp(canonical)) == canonical);
  }
}

TEST_CASE("randomized scripts round-trip") {
  std::mt19937_64 rng(21);
  auto pick = [&](int lo, int hi) { return lo + (int)(rng() % (unsigned)(hi - lo + 1)); };
  for (int iter = 0; iter < 200; ++iter) {
    CappScript s;
    int n_policies = pick(1, 4);
    for (int pi = 0; pi < n_policies; ++pi) {
      std::string tag = pi == 0 && pick(0, 1) ? "default" : "tag" + std::to_string(pi);
      Policy policy;
      int n_blocks = pick(1, 3);
      for (int bi = 0; bi < n_blocks; ++bi) {
        Block b;
        b.all_workers = pick(0, 3) == 0;
        if (!b.all_workers)
          for (int wi = 0, n = pick(1, 3); wi < n; ++wi)
            b.workers.push_back("W" + std::to_string(pick(1, 9)));
        b.strategy = static_cast<Strategy>(pick(0, 3));
        switch (pick(0, 4)) {
          case 0: b.invalidate = {Invalidate::Kind::None, 0, 0, Rational(0)}; break;
          case 1: b.invalidate = {Invalidate::Kind::Overload, 0, 0, Rational(0)}; break;
          case 2:
            b.invalidate = {Invalidate::Kind::CapacityUsed, pick(0, 100), 0, Rational(0)};
            break;
          case 3:
            b.invalidate = {Invalidate::Kind::MaxConcurrent, 0, pick(1, 64), Rational(0)};
            break;
          default:
            b.invalidate = {Invalidate::Kind::MaxLatency, 0, 0, Rational(pick(0, 4000), 4)};
            break;
        }
        policy.blocks.push_back(std::move(b));
      }
      policy.followup = pick(0, 1) ? Followup::Fail : Followup::Default;
      s.policies.emplace_back(tag, std::move(policy));
    }
    std::string canonical = serialize(s);
    CAPTURE(canonical);
    CHECK(parse_capp(canonical) == s);
  }
}

TEST_CASE("validation cross-checks fleet and registry") {
  CappScript prem = parse_capp(kPremUser);

  SUBCASE("consistent deployment") {
    auto diags = validate(prem, {"W1", "W2"}, {{"f1", "premUser"}, {"f2", "premUser"}});
    CHECK(diags.empty());
  }
  SUBCASE("unknown worker") {
    CappScript s = parse_capp("- a:\n  - workers:\n    - wrk: W9\n");
    auto diags = validate(s, {"W1", "W2"}, {{"f1", "a"}});
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
    CHECK(diags[0].message.find("unknown worker W9") != std::string::npos);
  }
  SUBCASE("function tag with no policy and no default") {
    auto diags = validate(prem, {"W1", "W2"},
                          {{"f1", "premUser"}, {"g", "other"}});
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
    CHECK(diags[0].message.find("no policy for tag other") != std::string::npos);
  }
  SUBCASE("unused policy is a warning") {
    auto diags = validate(prem, {"W1", "W2"}, {});
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
  }
  SUBCASE("followup default needs a default policy") {
    CappScript s = parse_capp("- a:\n  - workers:\n    - wrk: W1\n  followup: default\n");
    auto diags = validate(s, {"W1"}, {{"f1", "a"}});
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("no default policy") != std::string::npos);
  }
}
