#include "capp/sched/scheduler.hpp"

#include <algorithm>

#include "capp/solver/solver.hpp"

namespace capp::sched {

using app::Block;
using app::CappScript;
using app::Followup;
using app::Invalidate;
using app::Policy;
using app::Strategy;

WorkerCost worker_cost(const FunctionEntry& entry, const InvocationRequest& req,
                       const WorkerState& worker) {
  WorkerCost out;
  // Parameter names -> cost symbols; unknown names are ignored rather than
  // rejected so callers may pass one binding map for several functions.
  solver::Binding bound;
  for (const auto& [name, value] : req.bindings)
    if (auto sym = entry.env.param_symbol(name)) bound.emplace(*sym, value);

  cost::PExpr solved = solver::solve_symbolic(entry.program, bound);

  solver::Binding latencies;
  for (const auto& [service, sym] : entry.env.services) {
    auto it = worker.latency_ms.find(service);
    if (it != worker.latency_ms.end())
      latencies.emplace(sym, it->second);
    else
      out.notes.push_back("service " + service + " not in latency table of " + worker.label);
  }
  out.residual = solver::instantiate(solved, latencies);
  if (out.residual.is_const())
    out.value = out.residual.value();
  return out;
}

std::vector<std::string> strategy_order(
    const Block& block, const std::vector<std::string>& candidates,
    const std::map<std::string, std::optional<Rational>>& costs, FleetState& fleet,
    const std::string& policy_tag, int block_index) {
  std::vector<std::string> order = candidates;
  switch (block.strategy) {
    case Strategy::BestFirst:
      return order;
    case Strategy::Platform: {
      auto& cursor = fleet.round_robin[{policy_tag, block_index}];
      std::rotate(order.begin(), order.begin() + (cursor % order.size()), order.end());
      ++cursor;
      return order;
    }
    case Strategy::Random: {
      // Fisher-Yates with an explicit draw, stable across standard libraries.
      for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[fleet.rng() % i]);
      return order;
    }
    case Strategy::MinLatency: {
      for (const auto& label : candidates) {
        auto it = costs.find(label);
        if (it == costs.end() || !it->second.has_value()) return {};  // block skipped
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](const std::string& a, const std::string& b) {
                         return *costs.at(a) < *costs.at(b);
                       });
      return order;
    }
  }
  return order;
}

CheckOutcome invalidate_check(const WorkerState& worker, const Invalidate& rule,
                              const std::optional<Rational>& cost,
                              const FunctionEntry& entry) {
  switch (rule.kind) {
    case Invalidate::Kind::None:
      return {true, ""};
    case Invalidate::Kind::Overload:
      if ((int)worker.active.size() >= worker.concurrency_limit)
        return {false, "overload: " + std::to_string(worker.active.size()) +
                           " active invocations"};
      return {true, ""};
    case Invalidate::Kind::MaxConcurrent:
      if ((int)worker.active.size() >= rule.max_concurrent)
        return {false, "max_concurrent_invocations: " +
                           std::to_string(worker.active.size()) + " active"};
      return {true, ""};
    case Invalidate::Kind::CapacityUsed: {
      Rational used = worker.memory_in_use() + entry.memory_mb;
      if (used * Rational(100) > worker.memory_capacity_mb * Rational(rule.percent))
        return {false, "capacity_used above " + std::to_string(rule.percent) + "%"};
      return {true, ""};
    }
    case Invalidate::Kind::MaxLatency:
      if (!cost.has_value()) return {false, "unresolved cost"};
      if (*cost > rule.threshold)
        return {false, "max_latency: cost " + cost->to_decimal_string() + " > " +
                           rule.threshold.to_decimal_string()};
      return {true, ""};
  }
  return {true, ""};
}

namespace {

bool run_policy(const std::string& tag, const Policy& policy, const InvocationRequest& req,
                const FunctionEntry& entry, FleetState& fleet, ScheduleDecision& decision) {
  for (int bi = 0; bi < (int)policy.blocks.size(); ++bi) {
    const Block& block = policy.blocks[bi];
    BlockTrace trace;
    trace.policy = tag;
    trace.block_index = bi;
    trace.candidates =
        block.all_workers ? fleet.labels() : block.workers;

    bool needs_costs = block.strategy == Strategy::MinLatency ||
                       block.invalidate.kind == Invalidate::Kind::MaxLatency;
    if (needs_costs) {
      for (const auto& label : trace.candidates) {
        if (decision.candidate_costs.count(label)) continue;  // memoized per request
        const WorkerState* w = fleet.find(label);
        if (!w) {
          decision.candidate_costs[label] = std::nullopt;
          continue;
        }
        WorkerCost wc = worker_cost(entry, req, *w);
        decision.candidate_costs[label] = wc.value;
      }
    }

    if (trace.candidates.empty()) {
      trace.skip_reason = "no candidate workers";
      decision.trace.push_back(std::move(trace));
      continue;
    }
    trace.order = strategy_order(block, trace.candidates, decision.candidate_costs, fleet,
                                 tag, bi);
    if (trace.order.empty()) {
      trace.skip_reason = "min_latency with unresolved candidate cost";
      decision.trace.push_back(std::move(trace));
      continue;
    }

    for (const auto& label : trace.order) {
      WorkerState* w = fleet.find(label);
      if (!w) {
        trace.checks.push_back({label, false, "unknown worker"});
        continue;
      }
      std::optional<Rational> cost;
      auto it = decision.candidate_costs.find(label);
      if (it != decision.candidate_costs.end()) cost = it->second;
      CheckOutcome check = invalidate_check(*w, block.invalidate, cost, entry);
      if (!check.valid) {
        trace.checks.push_back({label, false, check.reason});
        continue;
      }
      if (w->memory_in_use() + entry.memory_mb > w->memory_capacity_mb) {
        trace.checks.push_back({label, false, "insufficient memory"});
        continue;
      }
      trace.checks.push_back({label, true, ""});
      decision.chosen = true;
      decision.worker = label;
      decision.trace.push_back(std::move(trace));
      return true;
    }
    decision.trace.push_back(std::move(trace));
  }
  return false;
}

}  // namespace

ScheduleDecision schedule(const InvocationRequest& req, const CappScript& script,
                          const Registry& registry, FleetState& fleet) {
  auto entry_it = registry.find(req.function);
  if (entry_it == registry.end())
    throw SchedError(SchedError::Kind::UnknownFunction,
                     "unknown function " + req.function);
  const FunctionEntry& entry = entry_it->second;

  std::string tag = entry.tag.empty() ? "default" : entry.tag;
  const Policy* policy = script.find(tag);
  if (!policy) {
    policy = script.find("default");
    if (!policy)
      throw SchedError(SchedError::Kind::MissingDefaultPolicy,
                       "no policy for tag " + tag + " and no default policy");
    tag = "default";
  }

  ScheduleDecision decision;
  decision.request_id = req.id;
  if (run_policy(tag, *policy, req, entry, fleet, decision)) return decision;

  if (policy->followup == Followup::Default && tag != "default") {
    const Policy* fallback = script.find("default");
    if (!fallback && policy->followup_explicit)
      throw SchedError(SchedError::Kind::MissingDefaultPolicy,
                       "followup: default but no default policy exists");
    if (fallback && run_policy("default", *fallback, req, entry, fleet, decision))
      return decision;
  }
  decision.chosen = false;
  decision.failure_reason = "policy exhausted";
  return decision;
}

void admit(FleetState& fleet, const ScheduleDecision& decision, const Registry& registry,
           const InvocationRequest& req, const Rational& completes_at_ms) {
  if (!decision.chosen) return;
  WorkerState* w = fleet.find(decision.worker);
  if (!w) return;
  const FunctionEntry& entry = registry.at(req.function);
  w->active.push_back({req.id, entry.memory_mb, completes_at_ms});
}

}  // namespace capp::sched
