#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capp/diagnostics.hpp"
#include "capp/rational.hpp"

namespace capp::app {

struct ScriptError : std::runtime_error {
  ScriptError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

enum class Strategy { Platform, Random, BestFirst, MinLatency };

struct Invalidate {
  enum class Kind { None, CapacityUsed, MaxConcurrent, Overload, MaxLatency };
  Kind kind = Kind::Overload;
  int percent = 0;           // CapacityUsed, 0..100
  int max_concurrent = 0;    // MaxConcurrent, > 0
  Rational threshold;        // MaxLatency, >= 0 (milliseconds)
  friend bool operator==(const Invalidate& a, const Invalidate& b) {
    return a.kind == b.kind && a.percent == b.percent &&
           a.max_concurrent == b.max_concurrent && a.threshold == b.threshold;
  }
};

struct Block {
  bool all_workers = false;
  std::vector<std::string> workers;  // nonempty when !all_workers
  Strategy strategy = Strategy::Platform;
  Invalidate invalidate;
  friend bool operator==(const Block& a, const Block& b) {
    return a.all_workers == b.all_workers && a.workers == b.workers &&
           a.strategy == b.strategy && a.invalidate == b.invalidate;
  }
};

enum class Followup { Default, Fail };

struct Policy {
  std::vector<Block> blocks;  // nonempty
  Followup followup = Followup::Default;
  // An absent followup clause behaves like `default` but exhausts quietly
  // when no default policy exists; an explicit one is a hard reference.
  bool followup_explicit = false;
  friend bool operator==(const Policy& a, const Policy& b) {
    return a.blocks == b.blocks && a.followup == b.followup;
  }
};

// Ordered collection of tagged policies; `default` is the fallback tag.
struct CappScript {
  std::vector<std::pair<std::string, Policy>> policies;
  const Policy* find(const std::string& tag) const {
    for (const auto& [t, p] : policies)
      if (t == tag) return &p;
    return nullptr;
  }
  friend bool operator==(const CappScript& a, const CappScript& b) {
    return a.policies == b.policies;
  }
};

const char* to_string(Strategy s);
const char* to_string(Followup f);

// Indentation-based concrete syntax:
//   - <tag>:
//     - workers: *            or a `- wrk: <label>` list
//       strategy: <platform|random|best_first|min_latency>
//       invalidate: <overload|none>      or a parameterized form:
//       invalidate:
//         capacity_used: <n>%          | max_concurrent_invocations: <n>
//                                      | max_latency: <number>
//     followup: <default|fail>
// Missing strategy/invalidate/followup default to platform/overload/default.
CappScript parse_capp(const std::string& text);

// Canonical form: fixed two-space indentation with all optional clauses
// spelled out. parse_capp(serialize(s)) == s.
std::string serialize(const CappScript& script);

// Deployment-time consistency between a script, the fleet's worker labels
// and the registered (function, tag) pairs.
std::vector<Diagnostic> validate(const CappScript& script,
                                 const std::vector<std::string>& fleet_labels,
                                 const std::vector<std::pair<std::string, std::string>>& registry);

}  // namespace capp::app
