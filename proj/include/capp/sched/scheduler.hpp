#pragma once

#include "capp/app/script.hpp"
#include "capp/sched/types.hpp"

namespace capp::sched {

// Solves the entry's program under the request bindings, then instantiates
// the service symbols against the worker's latency table.
WorkerCost worker_cost(const FunctionEntry& entry, const InvocationRequest& req,
                       const WorkerState& worker);

// Orders a block's candidates. best_first keeps block order; random shuffles
// with the fleet generator; platform rotates by the per-block cursor;
// min_latency sorts by cost ascending (ties in block order) and yields an
// empty order when any candidate cost is unresolved.
std::vector<std::string> strategy_order(
    const app::Block& block, const std::vector<std::string>& candidates,
    const std::map<std::string, std::optional<Rational>>& costs, FleetState& fleet,
    const std::string& policy_tag, int block_index);

struct CheckOutcome {
  bool valid;
  std::string reason;
};

// Admission check for one worker under one invalidation rule. Memory is a
// hard constraint checked separately at admission.
CheckOutcome invalidate_check(const WorkerState& worker, const app::Invalidate& rule,
                              const std::optional<Rational>& cost,
                              const FunctionEntry& entry);

// Runs the policy for `req.function`: resolves the tag (falling back to
// `default`), walks blocks in order and admits the first valid worker with
// enough free memory. On exhaustion, `followup: default` retries the default
// policy once; `followup: fail` (or exhaustion of the default policy) fails.
// The decision records candidate costs and a per-block trace. This function
// does not mutate worker occupancy; call `admit` with the decision to commit.
ScheduleDecision schedule(const InvocationRequest& req, const app::CappScript& script,
                          const Registry& registry, FleetState& fleet);

// Commits a chosen decision: the invocation occupies `memory_mb` on the
// worker until `completes_at_ms`.
void admit(FleetState& fleet, const ScheduleDecision& decision, const Registry& registry,
           const InvocationRequest& req, const Rational& completes_at_ms);

}  // namespace capp::sched
