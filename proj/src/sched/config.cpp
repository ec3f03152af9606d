#include "capp/sched/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "capp/minisl/parser.hpp"
#include "capp/minisl/wellformed.hpp"
#include "capp/solver/solver.hpp"

namespace capp::sched {

using nlohmann::ordered_json;

namespace {

Rational rational_from_json(const ordered_json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return Rational::from_string(j.dump());
    if (j.is_string()) return Rational::from_string(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw ConfigError("expected a number for " + what + ", got " + j.dump());
}

ordered_json parse_json(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in " + what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FleetState load_fleet(const std::string& json_text, std::uint64_t seed) {
  ordered_json j = parse_json(json_text, "fleet config");
  FleetState fleet;
  fleet.rng.seed(seed);
  if (!j.is_object() || !j.contains("workers") || !j["workers"].is_array())
    throw ConfigError("fleet config must be an object with a \"workers\" array");
  if (j.contains("default_duration_ms"))
    fleet.default_duration_ms = rational_from_json(j["default_duration_ms"],
                                                   "default_duration_ms");
  for (const auto& wj : j["workers"]) {
    WorkerState w;
    if (!wj.contains("label") || !wj["label"].is_string())
      throw ConfigError("each worker needs a string \"label\"");
    w.label = wj["label"].get<std::string>();
    if (fleet.find(w.label)) throw ConfigError("duplicate worker label " + w.label);
    if (wj.contains("memory_mb"))
      w.memory_capacity_mb = rational_from_json(wj["memory_mb"], "memory_mb");
    if (wj.contains("concurrency_limit")) {
      if (!wj["concurrency_limit"].is_number_integer() ||
          wj["concurrency_limit"].get<int>() <= 0)
        throw ConfigError("concurrency_limit must be a positive integer");
      w.concurrency_limit = wj["concurrency_limit"].get<int>();
    }
    if (wj.contains("latency_ms")) {
      if (!wj["latency_ms"].is_object())
        throw ConfigError("latency_ms must map service names to latencies");
      for (const auto& [service, value] : wj["latency_ms"].items()) {
        Rational lat = rational_from_json(value, "latency of " + service);
        if (lat.is_negative()) throw ConfigError("negative latency for " + service);
        w.latency_ms.emplace(service, lat);
      }
    }
    fleet.workers.push_back(std::move(w));
  }
  if (fleet.workers.empty()) throw ConfigError("fleet has no workers");
  return fleet;
}

FunctionEntry deploy_function(const std::string& name, const std::string& source_text,
                              const std::string& tag_override, const Rational& memory_mb,
                              cost::LoopBound mode) {
  minisl::FunctionDef fn = minisl::parse_function(source_text, name);
  auto diags = minisl::check_wellformed(fn);
  if (has_errors(diags)) {
    std::string msg = "function " + name + " is not well-formed:";
    for (const auto& d : diags) msg += " " + d.message + ";";
    throw ConfigError(msg);
  }
  cost::InferenceResult inferred = cost::infer_function(fn, {}, mode);
  FunctionEntry entry;
  entry.name = name;
  entry.tag = tag_override.empty() ? fn.tag : tag_override;
  entry.base_expression = solver::solve_symbolic(inferred.program, {});
  entry.program = std::move(inferred.program);
  entry.env = std::move(inferred.env);
  entry.memory_mb = memory_mb;
  return entry;
}

Registry load_registry(const std::string& json_text, const std::string& base_dir,
                       cost::LoopBound mode) {
  ordered_json j = parse_json(json_text, "registry");
  if (!j.is_object()) throw ConfigError("registry must be a JSON object");
  Registry registry;
  for (const auto& [name, fj] : j.items()) {
    if (!fj.is_object()) throw ConfigError("registry entry " + name + " must be an object");
    std::string source;
    if (fj.contains("source_text")) {
      source = fj["source_text"].get<std::string>();
    } else if (fj.contains("source")) {
      std::string path = fj["source"].get<std::string>();
      if (!path.empty() && path[0] != '/' && !base_dir.empty())
        path = base_dir + "/" + path;
      source = read_file(path);
    } else {
      throw ConfigError("registry entry " + name + " needs \"source\" or \"source_text\"");
    }
    std::string tag = fj.contains("tag") ? fj["tag"].get<std::string>() : "";
    Rational memory =
        fj.contains("memory_mb") ? rational_from_json(fj["memory_mb"], "memory_mb") : Rational(128);
    registry.emplace(name, deploy_function(name, source, tag, memory, mode));
  }
  return registry;
}

InvocationRequest parse_request(const std::string& json_text) {
  ordered_json j = parse_json(json_text, "request");
  InvocationRequest req;
  if (!j.contains("id") || !j.contains("function"))
    throw ConfigError("request needs \"id\" and \"function\"");
  req.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  req.function = j["function"].get<std::string>();
  if (j.contains("bindings"))
    for (const auto& [k, v] : j["bindings"].items())
      req.bindings.emplace(k, rational_from_json(v, "binding " + k));
  if (j.contains("arrival_ms"))
    req.arrival_ms = rational_from_json(j["arrival_ms"], "arrival_ms");
  return req;
}

std::vector<InvocationRequest> load_trace(const std::string& jsonl_text) {
  std::vector<InvocationRequest> trace;
  std::istringstream is(jsonl_text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    trace.push_back(parse_request(line));
  }
  return trace;
}

namespace {

ordered_json decision_json(const ScheduleDecision& d) {
  ordered_json out;
  out["request"] = d.request_id;
  if (d.chosen)
    out["outcome"] = {{"status", "chosen"}, {"worker", d.worker}};
  else
    out["outcome"] = {{"status", "failed"}, {"reason", d.failure_reason}};
  ordered_json costs = ordered_json::object();
  for (const auto& [label, cost] : d.candidate_costs)
    costs[label] = cost ? ordered_json(cost->to_decimal_string()) : ordered_json("unresolved");
  out["candidate_costs"] = std::move(costs);
  ordered_json trace = ordered_json::array();
  for (const auto& bt : d.trace) {
    ordered_json b;
    b["policy"] = bt.policy;
    b["block"] = bt.block_index;
    b["candidates"] = bt.candidates;
    b["order"] = bt.order;
    ordered_json checks = ordered_json::array();
    for (const auto& c : bt.checks) {
      ordered_json cj;
      cj["worker"] = c.worker;
      cj["result"] = c.valid ? "valid" : "invalid";
      if (!c.valid) cj["reason"] = c.reason;
      checks.push_back(std::move(cj));
    }
    b["checks"] = std::move(checks);
    if (!bt.skip_reason.empty()) b["skipped"] = bt.skip_reason;
    trace.push_back(std::move(b));
  }
  out["trace"] = std::move(trace);
  return out;
}

}  // namespace

std::string to_json(const ScheduleDecision& decision) {
  return decision_json(decision).dump();
}

std::string to_json(const std::vector<Diagnostic>& diagnostics) {
  ordered_json out = ordered_json::array();
  for (const auto& d : diagnostics) {
    ordered_json dj;
    dj["severity"] = to_string(d.severity);
    dj["line"] = d.line;
    dj["column"] = d.column;
    dj["message"] = d.message;
    out.push_back(std::move(dj));
  }
  return out.dump();
}

std::string event_log_to_jsonl(const std::vector<SimEvent>& log) {
  std::ostringstream os;
  for (const auto& ev : log) {
    ordered_json j;
    j["time"] = ev.time_ms.to_decimal_string();
    if (ev.kind == SimEvent::Kind::Schedule) {
      j["event"] = "schedule";
      j["request"] = ev.request_id;
      if (ev.duration_ms) j["duration"] = ev.duration_ms->to_decimal_string();
      j["decision"] = decision_json(ev.decision);
    } else {
      j["event"] = "complete";
      j["request"] = ev.request_id;
      j["worker"] = ev.worker;
    }
    os << j.dump() << "\n";
  }
  return os.str();
}

namespace {

ordered_json expr_json(const minisl::ExprPtr& e) {
  using minisl::Expr;
  ordered_json j;
  switch (e->kind) {
    case Expr::Kind::IntLit:
      j["kind"] = "int";
      j["value"] = e->value;
      return j;
    case Expr::Kind::CounterRef:
      j["kind"] = "counter";
      j["name"] = e->name;
      return j;
    case Expr::Kind::ParamRef:
      j["kind"] = "param";
      j["name"] = e->name;
      return j;
    case Expr::Kind::BinOp:
      j["kind"] = "binop";
      j["op"] = minisl::to_string(e->op);
      j["lhs"] = expr_json(e->lhs);
      j["rhs"] = expr_json(e->rhs);
      return j;
  }
  return j;
}

ordered_json stmt_json(const minisl::StmtPtr& s) {
  using minisl::Stmt;
  ordered_json j;
  switch (s->kind) {
    case Stmt::Kind::Empty:
      j["kind"] = "empty";
      return j;
    case Stmt::Kind::Call: {
      j["kind"] = "call";
      j["service"] = s->service;
      ordered_json args = ordered_json::array();
      for (const auto& a : s->args) args.push_back(expr_json(a));
      j["args"] = std::move(args);
      j["cont"] = stmt_json(s->cont);
      return j;
    }
    case Stmt::Kind::IfExp:
      j["kind"] = "if_exp";
      j["line"] = s->line;
      j["guard"] = expr_json(s->guard);
      j["then"] = stmt_json(s->then_branch);
      j["else"] = stmt_json(s->else_branch);
      return j;
    case Stmt::Kind::IfCall: {
      j["kind"] = "if_call";
      j["line"] = s->line;
      j["service"] = s->service;
      ordered_json args = ordered_json::array();
      for (const auto& a : s->args) args.push_back(expr_json(a));
      j["args"] = std::move(args);
      j["then"] = stmt_json(s->then_branch);
      j["else"] = stmt_json(s->else_branch);
      return j;
    }
    case Stmt::Kind::For:
      j["kind"] = "for";
      j["line"] = s->line;
      j["counter"] = s->counter;
      j["bound"] = expr_json(s->bound);
      j["body"] = stmt_json(s->body);
      return j;
  }
  return j;
}

}  // namespace

std::string function_to_json(const minisl::FunctionDef& fn) {
  ordered_json j;
  j["source_name"] = fn.source_name;
  if (!fn.tag.empty()) j["tag"] = fn.tag;
  j["params"] = fn.params;
  j["body"] = stmt_json(fn.body);
  return j.dump(2);
}

}  // namespace capp::sched
