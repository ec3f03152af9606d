#pragma once

#include "capp/app/script.hpp"
#include "capp/sched/types.hpp"

namespace capp::sched {

struct SimEvent {
  enum class Kind { Schedule, Complete };
  Kind kind;
  Rational time_ms;
  std::string request_id;
  ScheduleDecision decision;       // Schedule
  std::optional<Rational> duration_ms;  // Schedule, when chosen and resolved
  std::string worker;              // Complete
};

// Discrete-event loop over an arrival-ordered request trace. A chosen
// invocation occupies its worker for its resolved cost in milliseconds
// (the fleet's default duration when unresolved); completions at time t are
// applied before arrivals at time t. Deterministic for a fixed fleet seed.
std::vector<SimEvent> simulate(const std::vector<InvocationRequest>& trace,
                               const app::CappScript& script, const Registry& registry,
                               FleetState& fleet);

}  // namespace capp::sched
