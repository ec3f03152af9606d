#include "capp/sched/simulate.hpp"

#include <queue>
#include <stdexcept>

#include "capp/sched/scheduler.hpp"

namespace capp::sched {

namespace {

struct PendingCompletion {
  Rational time_ms;
  std::uint64_t seq;  // admission order breaks time ties
  std::string request_id;
  std::string worker;
};

struct Later {
  bool operator()(const PendingCompletion& a, const PendingCompletion& b) const {
    if (a.time_ms != b.time_ms) return b.time_ms < a.time_ms;
    return b.seq < a.seq;
  }
};

}  // namespace

std::vector<SimEvent> simulate(const std::vector<InvocationRequest>& trace,
                               const app::CappScript& script, const Registry& registry,
                               FleetState& fleet) {
  for (size_t i = 1; i < trace.size(); ++i)
    if (trace[i].arrival_ms < trace[i - 1].arrival_ms)
      throw std::invalid_argument("trace is not sorted by arrival time");

  std::vector<SimEvent> log;
  std::priority_queue<PendingCompletion, std::vector<PendingCompletion>, Later> pending;
  std::uint64_t seq = 0;

  auto complete = [&](const PendingCompletion& c) {
    if (WorkerState* w = fleet.find(c.worker)) {
      for (auto it = w->active.begin(); it != w->active.end(); ++it)
        if (it->id == c.request_id) {
          w->active.erase(it);
          break;
        }
    }
    SimEvent ev;
    ev.kind = SimEvent::Kind::Complete;
    ev.time_ms = c.time_ms;
    ev.request_id = c.request_id;
    ev.worker = c.worker;
    log.push_back(std::move(ev));
  };

  for (const InvocationRequest& req : trace) {
    while (!pending.empty() && pending.top().time_ms <= req.arrival_ms) {
      complete(pending.top());
      pending.pop();
    }

    SimEvent ev;
    ev.kind = SimEvent::Kind::Schedule;
    ev.time_ms = req.arrival_ms;
    ev.request_id = req.id;
    ev.decision = schedule(req, script, registry, fleet);

    if (ev.decision.chosen) {
      std::optional<Rational> cost;
      auto it = ev.decision.candidate_costs.find(ev.decision.worker);
      if (it != ev.decision.candidate_costs.end()) {
        cost = it->second;
      } else {
        WorkerCost wc = worker_cost(registry.at(req.function), req,
                                    *fleet.find(ev.decision.worker));
        ev.decision.candidate_costs[ev.decision.worker] = wc.value;
        cost = wc.value;
      }
      Rational duration = cost.value_or(fleet.default_duration_ms);
      ev.duration_ms = duration;
      Rational done = req.arrival_ms + duration;
      admit(fleet, ev.decision, registry, req, done);
      pending.push({done, seq++, req.id, ev.decision.worker});
    }
    log.push_back(std::move(ev));
  }

  while (!pending.empty()) {
    complete(pending.top());
    pending.pop();
  }
  return log;
}

}  // namespace capp::sched
