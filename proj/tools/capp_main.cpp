#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "capp/app/script.hpp"
#include "capp/cost/infer.hpp"
#include "capp/cost/text_format.hpp"
#include "capp/minisl/parser.hpp"
#include "capp/minisl/wellformed.hpp"
#include "capp/sched/config.hpp"
#include "capp/sched/scheduler.hpp"
#include "capp/sched/simulate.hpp"
#include "capp/solver/solver.hpp"

namespace {

using capp::Rational;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts inline JSON (starts with '{') or a path to a JSON file.
std::string json_or_file(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return arg;
  return read_file(arg);
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << payload;
  }
}

void emit_diagnostic(const std::string& message) {
  nlohmann::ordered_json j;
  j["severity"] = "error";
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

std::map<std::string, std::string> parse_symbol_map(const std::string& arg) {
  std::map<std::string, std::string> out;
  if (arg.empty()) return out;
  auto j = nlohmann::json::parse(json_or_file(arg));
  for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  return out;
}

capp::solver::Binding parse_binding(const std::string& arg) {
  capp::solver::Binding out;
  if (arg.empty()) return out;
  auto j = nlohmann::json::parse(json_or_file(arg));
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_integer())
      out.emplace(k, Rational(v.get<long long>()));
    else if (v.is_string())
      out.emplace(k, Rational::from_string(v.get<std::string>()));
    else
      out.emplace(k, Rational::from_string(v.dump()));
  }
  return out;
}

capp::cost::LoopBound loop_bound_mode(const std::string& name) {
  if (name == "inclusive") return capp::cost::LoopBound::Inclusive;
  if (name == "exclusive") return capp::cost::LoopBound::Exclusive;
  throw std::runtime_error("--loop-bound must be 'exclusive' or 'inclusive'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static cost analysis and cost-aware scheduling for serverless functions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  app.add_option("--out", out_path, "write the payload to a file instead of stdout");

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a .msl function and print its AST as JSON");
  std::string parse_input, parse_name;
  cmd_parse->add_option("input", parse_input, "function source (.msl)")->required();
  cmd_parse->add_option("--name", parse_name, "function name (defaults to the file name)");

  // infer
  auto* cmd_infer = app.add_subcommand("infer", "derive the cost program of a .msl function");
  std::string infer_input, infer_symbols, infer_loop = "exclusive";
  cmd_infer->add_option("input", infer_input, "function source (.msl)")->required();
  cmd_infer->add_option("--symbols", infer_symbols,
                        "JSON object renaming source names to cost symbols");
  cmd_infer->add_option("--loop-bound", infer_loop, "exclusive (default) or inclusive");

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "evaluate or symbolically solve a cost program");
  std::string solve_input, solve_bind;
  bool solve_symbolic_flag = false;
  long long solve_fuel = 1'000'000;
  cmd_solve->add_option("input", solve_input, "cost program (.cp)")->required();
  cmd_solve->add_option("--bind", solve_bind, "JSON bindings (inline or a file path)");
  cmd_solve->add_flag("--symbolic", solve_symbolic_flag,
                      "emit a closed-form expression instead of a number");
  cmd_solve->add_option("--fuel", solve_fuel, "unfolding budget for concrete evaluation");

  // export
  auto* cmd_export = app.add_subcommand("export", "emit solver-interchange clauses");
  std::string export_input;
  cmd_export->add_option("input", export_input, "cost program (.cp)")->required();

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check a policy script against a deployment");
  std::string val_script, val_fleet, val_registry;
  cmd_validate->add_option("script", val_script, "policy script (.capp.yml)")->required();
  cmd_validate->add_option("--fleet", val_fleet, "fleet config (JSON)")->required();
  cmd_validate->add_option("--registry", val_registry, "function registry (JSON)")->required();

  // schedule
  auto* cmd_schedule = app.add_subcommand("schedule", "schedule a single request");
  std::string sch_request, sch_script, sch_fleet, sch_registry;
  std::uint64_t sch_seed = 0;
  cmd_schedule->add_option("--request", sch_request, "request (JSON)")->required();
  cmd_schedule->add_option("--script", sch_script, "policy script")->required();
  cmd_schedule->add_option("--fleet", sch_fleet, "fleet config (JSON)")->required();
  cmd_schedule->add_option("--registry", sch_registry, "function registry (JSON)")->required();
  cmd_schedule->add_option("--seed", sch_seed, "seed for the random strategy");

  // simulate
  auto* cmd_simulate = app.add_subcommand("simulate", "run a request trace through the fleet");
  std::string sim_trace, sim_script, sim_fleet, sim_registry;
  std::uint64_t sim_seed = 0;
  cmd_simulate->add_option("--trace", sim_trace, "request trace (JSON Lines)")->required();
  cmd_simulate->add_option("--script", sim_script, "policy script")->required();
  cmd_simulate->add_option("--fleet", sim_fleet, "fleet config (JSON)")->required();
  cmd_simulate->add_option("--registry", sim_registry, "function registry (JSON)")->required();
  cmd_simulate->add_option("--seed", sim_seed, "seed for the random strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_parse) {
      std::string name = parse_name;
      if (name.empty()) {
        name = parse_input;
        auto slash = name.find_last_of('/');
        if (slash != std::string::npos) name = name.substr(slash + 1);
        auto dot = name.find('.');
        if (dot != std::string::npos) name = name.substr(0, dot);
      }
      auto fn = capp::minisl::parse_function(read_file(parse_input), name);
      auto diags = capp::minisl::check_wellformed(fn);
      if (capp::has_errors(diags)) {
        std::cerr << capp::sched::to_json(diags) << "\n";
        return 1;
      }
      emit(capp::sched::function_to_json(fn), out_path);
      return 0;
    }
    if (*cmd_infer) {
      auto fn = capp::minisl::parse_function(read_file(infer_input), "");
      auto diags = capp::minisl::check_wellformed(fn);
      if (capp::has_errors(diags)) {
        std::cerr << capp::sched::to_json(diags) << "\n";
        return 1;
      }
      auto result = capp::cost::infer_function(fn, parse_symbol_map(infer_symbols),
                                               loop_bound_mode(infer_loop));
      emit(capp::cost::to_text(result.program), out_path);
      return 0;
    }
    if (*cmd_solve) {
      auto program = capp::cost::parse_program(read_file(solve_input));
      auto binding = parse_binding(solve_bind);
      if (solve_symbolic_flag) {
        emit(capp::cost::to_text(capp::solver::solve_symbolic(program, binding)), out_path);
      } else {
        auto result = capp::solver::evaluate_concrete(program, binding, solve_fuel);
        for (const auto& head : result.unmatched_calls)
          std::cerr << "{\"severity\":\"warning\",\"message\":\"no guard satisfied for "
                    << head << "; contributed 0\"}\n";
        emit(result.value.to_decimal_string(), out_path);
      }
      return 0;
    }
    if (*cmd_export) {
      auto program = capp::cost::parse_program(read_file(export_input));
      emit(capp::solver::export_interchange(program), out_path);
      return 0;
    }
    if (*cmd_validate) {
      auto script = capp::app::parse_capp(read_file(val_script));
      auto fleet = capp::sched::load_fleet(read_file(val_fleet));
      auto registry =
          capp::sched::load_registry(read_file(val_registry), dirname_of(val_registry));
      std::vector<std::pair<std::string, std::string>> tagged;
      for (const auto& [name, entry] : registry) tagged.emplace_back(name, entry.tag);
      auto diags = capp::app::validate(script, fleet.labels(), tagged);
      emit(capp::sched::to_json(diags), out_path);
      return capp::has_errors(diags) ? 1 : 0;
    }
    if (*cmd_schedule) {
      auto script = capp::app::parse_capp(read_file(sch_script));
      auto fleet = capp::sched::load_fleet(read_file(sch_fleet), sch_seed);
      auto registry =
          capp::sched::load_registry(read_file(sch_registry), dirname_of(sch_registry));
      auto request = capp::sched::parse_request(json_or_file(sch_request));
      auto decision = capp::sched::schedule(request, script, registry, fleet);
      emit(capp::sched::to_json(decision), out_path);
      return 0;
    }
    if (*cmd_simulate) {
      auto script = capp::app::parse_capp(read_file(sim_script));
      auto fleet = capp::sched::load_fleet(read_file(sim_fleet), sim_seed);
      auto registry =
          capp::sched::load_registry(read_file(sim_registry), dirname_of(sim_registry));
      auto trace = capp::sched::load_trace(read_file(sim_trace));
      auto log = capp::sched::simulate(trace, script, registry, fleet);
      emit(capp::sched::event_log_to_jsonl(log), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    emit_diagnostic(e.what());
    return 1;
  }
  return 2;
}
