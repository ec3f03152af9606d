#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capp/cost/env.hpp"
#include "capp/cost/program.hpp"
#include "capp/rational.hpp"

namespace capp::sched {

struct SchedError : std::runtime_error {
  enum class Kind { UnknownFunction, MissingDefaultPolicy };
  SchedError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  Kind kind;
};

struct ActiveInvocation {
  std::string id;
  Rational memory_mb;
  Rational completes_at_ms;
};

struct WorkerState {
  std::string label;
  std::map<std::string, Rational> latency_ms;  // service name -> access latency
  Rational memory_capacity_mb{2048};
  int concurrency_limit = 16;  // consulted by the `overload` invalidation
  std::vector<ActiveInvocation> active;

  Rational memory_in_use() const {
    Rational total(0);
    for (const auto& inv : active) total += inv.memory_mb;
    return total;
  }
};

// A deployed function: its cost program, the symbolic solution precomputed
// at deployment time, and the symbol environment linking service names and
// parameter names to cost symbols.
struct FunctionEntry {
  std::string name;
  std::string tag;  // empty: only the default policy applies
  cost::CostProgram program;
  cost::PExpr base_expression;
  cost::Env env;
  Rational memory_mb{128};
};

struct InvocationRequest {
  std::string id;
  std::string function;
  std::map<std::string, Rational> bindings;  // parameter name -> value
  Rational arrival_ms{0};
};

// Result of pricing one worker for one request: an exact value when every
// needed symbol resolved, otherwise the residual expression plus notes
// (e.g. services missing from the worker's latency table).
struct WorkerCost {
  std::optional<Rational> value;
  cost::PExpr residual;
  std::vector<std::string> notes;
  bool resolved() const { return value.has_value(); }
};

struct CheckRecord {
  std::string worker;
  bool valid;
  std::string reason;  // set when invalid
};

struct BlockTrace {
  std::string policy;
  int block_index = 0;
  std::vector<std::string> candidates;
  std::vector<std::string> order;      // empty when the block was skipped
  std::vector<CheckRecord> checks;
  std::string skip_reason;             // set when the block was skipped
};

struct ScheduleDecision {
  std::string request_id;
  bool chosen = false;
  std::string worker;          // when chosen
  std::string failure_reason;  // when failed
  std::map<std::string, std::optional<Rational>> candidate_costs;  // nullopt = unresolved
  std::vector<BlockTrace> trace;
};

// Mutable fleet: worker states, the per-block round-robin cursors used by
// the `platform` strategy, and the seeded generator behind `random`.
struct FleetState {
  std::vector<WorkerState> workers;
  Rational default_duration_ms{100};  // occupancy for unresolved-cost invocations
  std::map<std::pair<std::string, int>, std::uint64_t> round_robin;
  std::mt19937_64 rng{0};

  WorkerState* find(const std::string& label) {
    for (auto& w : workers)
      if (w.label == label) return &w;
    return nullptr;
  }
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(workers.size());
    for (const auto& w : workers) out.push_back(w.label);
    return out;
  }
};

using Registry = std::map<std::string, FunctionEntry>;

}  // namespace capp::sched
