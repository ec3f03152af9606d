#pragma once

#include <string>
#include <vector>

#include "capp/cost/infer.hpp"
#include "capp/sched/simulate.hpp"
#include "capp/sched/types.hpp"

namespace capp::sched {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Fleet JSON:
//   {"workers":[{"label":"W1","memory_mb":2048,"concurrency_limit":16,
//                "latency_ms":{"Service":12}}],
//    "default_duration_ms":100}
// Rationals accept integers, decimal strings ("2.5") or fractions ("5/2").
FleetState load_fleet(const std::string& json_text, std::uint64_t seed = 0);

// Parses, checks and infers one function source into a deployable entry.
// `tag_override` (when nonempty) wins over the source's `// tag:` comment.
FunctionEntry deploy_function(const std::string& name, const std::string& source_text,
                              const std::string& tag_override, const Rational& memory_mb,
                              cost::LoopBound mode = cost::LoopBound::Exclusive);

// Registry JSON: {"fn":{"source":"fn.msl","tag":"t","memory_mb":128}} with
// "source_text" accepted as an inline alternative to "source". Relative
// paths resolve against `base_dir`.
Registry load_registry(const std::string& json_text, const std::string& base_dir,
                       cost::LoopBound mode = cost::LoopBound::Exclusive);

// One request per line:
//   {"id":"r1","function":"f1","bindings":{"m":2},"arrival_ms":0}
std::vector<InvocationRequest> load_trace(const std::string& jsonl_text);
InvocationRequest parse_request(const std::string& json_text);

// Machine-readable renderings (stable field order, exact rationals as
// strings).
std::string to_json(const ScheduleDecision& decision);
std::string to_json(const std::vector<Diagnostic>& diagnostics);
std::string event_log_to_jsonl(const std::vector<SimEvent>& log);
std::string function_to_json(const minisl::FunctionDef& fn);

}  // namespace capp::sched
