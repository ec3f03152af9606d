#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "capp/app/script.hpp"
#include "capp/cost/infer.hpp"
#include "capp/cost/text_format.hpp"
#include "capp/minisl/parser.hpp"
#include "capp/minisl/printer.hpp"
#include "capp/minisl/wellformed.hpp"
#include "capp/sched/config.hpp"
#include "capp/sched/scheduler.hpp"
#include "capp/sched/simulate.hpp"
#include "capp/solver/solver.hpp"

namespace py = pybind11;

namespace {

capp::cost::LoopBound loop_mode(const std::string& name) {
  if (name == "inclusive") return capp::cost::LoopBound::Inclusive;
  return capp::cost::LoopBound::Exclusive;
}

capp::solver::Binding binding_from_dict(const py::dict& d) {
  capp::solver::Binding b;
  for (const auto& item : d) {
    auto key = item.first.cast<std::string>();
    if (py::isinstance<py::int_>(item.second))
      b.emplace(key, capp::Rational(item.second.cast<long long>()));
    else
      b.emplace(key, capp::Rational::from_string(item.second.cast<std::string>()));
  }
  return b;
}

std::string parse_to_json(const std::string& source, const std::string& name) {
  return capp::sched::function_to_json(capp::minisl::parse_function(source, name));
}

std::string wellformed_diagnostics(const std::string& source) {
  auto fn = capp::minisl::parse_function(source, "");
  return capp::sched::to_json(capp::minisl::check_wellformed(fn));
}

std::string format_source(const std::string& source) {
  return capp::minisl::to_source(capp::minisl::parse_function(source, ""));
}

std::string infer(const std::string& source, const std::map<std::string, std::string>& symbols,
                  const std::string& loop_bound) {
  auto fn = capp::minisl::parse_function(source, "");
  auto diags = capp::minisl::check_wellformed(fn);
  if (capp::has_errors(diags))
    throw std::invalid_argument("function is not well-formed: " +
                                capp::sched::to_json(diags));
  return capp::cost::to_text(
      capp::cost::infer_function(fn, symbols, loop_mode(loop_bound)).program);
}

std::string solve(const std::string& program_text, const py::dict& bindings, bool symbolic,
                  long long fuel) {
  auto program = capp::cost::parse_program(program_text);
  auto b = binding_from_dict(bindings);
  if (symbolic) return capp::cost::to_text(capp::solver::solve_symbolic(program, b));
  return capp::solver::evaluate_concrete(program, b, fuel).value.to_decimal_string();
}

std::string export_interchange(const std::string& program_text) {
  return capp::solver::export_interchange(capp::cost::parse_program(program_text));
}

std::string capp_canonical(const std::string& script_text) {
  return capp::app::serialize(capp::app::parse_capp(script_text));
}

std::string validate_script(const std::string& script_text,
                            const std::vector<std::string>& fleet_labels,
                            const std::vector<std::pair<std::string, std::string>>& registry) {
  auto script = capp::app::parse_capp(script_text);
  return capp::sched::to_json(capp::app::validate(script, fleet_labels, registry));
}

std::string schedule(const std::string& request_json, const std::string& script_text,
                     const std::string& fleet_json, const std::string& registry_json,
                     std::uint64_t seed) {
  auto script = capp::app::parse_capp(script_text);
  auto fleet = capp::sched::load_fleet(fleet_json, seed);
  auto registry = capp::sched::load_registry(registry_json, ".");
  auto request = capp::sched::parse_request(request_json);
  return capp::sched::to_json(capp::sched::schedule(request, script, registry, fleet));
}

std::string simulate(const std::string& trace_jsonl, const std::string& script_text,
                     const std::string& fleet_json, const std::string& registry_json,
                     std::uint64_t seed) {
  auto script = capp::app::parse_capp(script_text);
  auto fleet = capp::sched::load_fleet(fleet_json, seed);
  auto registry = capp::sched::load_registry(registry_json, ".");
  auto trace = capp::sched::load_trace(trace_jsonl);
  return capp::sched::event_log_to_jsonl(
      capp::sched::simulate(trace, script, registry, fleet));
}

}  // namespace

PYBIND11_MODULE(_capp, m) {
  m.doc() = "cost analysis and cost-aware scheduling for serverless functions";

  m.def("parse_function", &parse_to_json, py::arg("source"), py::arg("name") = "",
        "Parse a function source; returns the AST as a JSON string.");
  m.def("check_wellformed", &wellformed_diagnostics, py::arg("source"),
        "Parse and check a function source; returns diagnostics as a JSON array.");
  m.def("format_source", &format_source, py::arg("source"),
        "Parse and pretty-print a function source in canonical layout.");
  m.def("infer", &infer, py::arg("source"),
        py::arg("symbols") = std::map<std::string, std::string>{},
        py::arg("loop_bound") = "exclusive",
        "Derive the cost program of a function; returns the program text.");
  m.def("solve", &solve, py::arg("program"), py::arg("bindings") = py::dict(),
        py::arg("symbolic") = false, py::arg("fuel") = 1'000'000LL,
        "Evaluate a cost program (or solve it symbolically with --symbolic semantics).");
  m.def("export_interchange", &export_interchange, py::arg("program"),
        "Render a cost program as external-solver clauses.");
  m.def("capp_canonical", &capp_canonical, py::arg("script"),
        "Parse a policy script and return its canonical serialization.");
  m.def("validate_script", &validate_script, py::arg("script"), py::arg("fleet_labels"),
        py::arg("registry"),
        "Validate a policy script against worker labels and (function, tag) pairs.");
  m.def("schedule", &schedule, py::arg("request"), py::arg("script"), py::arg("fleet"),
        py::arg("registry"), py::arg("seed") = 0,
        "Schedule one request; returns the decision as a JSON string.");
  m.def("simulate", &simulate, py::arg("trace"), py::arg("script"), py::arg("fleet"),
        py::arg("registry"), py::arg("seed") = 0,
        "Run a request trace; returns the event log as JSON Lines.");
}
