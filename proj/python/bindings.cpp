#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liftsl/error.hpp"
#include "liftsl/input.hpp"
#include "liftsl/lifting.hpp"
#include "liftsl/parametricity.hpp"
#include "liftsl/scenario.hpp"

namespace py = pybind11;
using namespace liftsl;

namespace {

std::set<std::string> avar_set(const std::vector<std::string>& xs) { return {xs.begin(), xs.end()}; }

py::dict verdict_dict(const ImplicationForm& f) {
  const LayoutGraph g = compute_layout(f);
  const LiftVerdict v = lift_check(g);
  py::dict d;
  d["implication"] = to_string(f);
  d["layout"] = describe(g);
  d["verdict"] = v.label();
  d["lifts"] = v.lifts;
  d["undecided"] = v.undecided;
  return d;
}

py::object package_dict(const CounterexamplePackage& p) {
  const RecheckResult rc = recheck(p);
  py::dict d;
  d["implication"] = to_string(p.impl);
  d["rho"] = to_string(p.binary_rho);
  d["witness"] = to_string(p.witness);
  d["origin"] = p.origin;
  d["rechecked"] = rc.ok();
  return d;
}

}  // namespace

PYBIND11_MODULE(_liftsl, m) {
  m.doc() = "Lifting separation-logic implications with assertion variables to relational interpretations.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

  m.def(
      "pretty",
      [](const std::string& text, const std::vector<std::string>& avars) {
        return pretty(parse_assertion(text, avar_set(avars)));
      },
      py::arg("text"), py::arg("avars") = std::vector<std::string>{});

  m.def(
      "normalize",
      [](const std::string& text, const std::vector<std::string>& avars) -> py::object {
        const auto s = to_simple(parse_assertion(text, avar_set(avars)));
        if (!s) return py::none();
        return py::str(to_string(*s));
      },
      py::arg("text"), py::arg("avars") = std::vector<std::string>{},
      "Simple form of an assertion, or None.");

  m.def(
      "chk",
      [](const std::string& lhs, const std::string& rhs, const std::vector<std::string>& avars) {
        const auto av = avar_set(avars);
        const ChkReport r = chk(parse_assertion(lhs, av), parse_assertion(rhs, av));
        py::dict d;
        d["ok"] = r.ok;
        d["headline"] = r.headline();
        py::list fam;
        for (const auto& f : r.family) fam.append(to_string(f));
        d["family"] = fam;
        return d;
      },
      py::arg("lhs"), py::arg("rhs"), py::arg("avars"));

  m.def(
      "lift",
      [](const std::string& lhs, const std::string& rhs, const std::vector<std::string>& avars) {
        const auto av = avar_set(avars);
        const ImplicationForm f = as_implication_form(parse_assertion(lhs, av), parse_assertion(rhs, av));
        py::dict d = verdict_dict(f);
        if (!d["lifts"].cast<bool>() && !d["undecided"].cast<bool>()) {
          const auto r = witness_search(compute_layout(f), &f);
          d["counterexample"] = r.package ? package_dict(*r.package) : py::none();
        }
        return d;
      },
      py::arg("lhs"), py::arg("rhs"), py::arg("avars"),
      "Lifting verdict for a canonical implication, with a counterexample package on NoGuarantee.");

  m.def(
      "lift_file",
      [](const std::string& text) {
        const ImplicationInput in = parse_implication_input(text);
        return verdict_dict(as_implication_form(in.lhs, in.rhs));
      },
      py::arg("text"));

  m.def(
      "lift_counts",
      [](const std::vector<std::string>& vars, std::vector<std::vector<int>> pi, std::vector<std::vector<int>> omega) {
        return lift_check(layout_from_counts(vars, std::move(pi), std::move(omega))).label();
      },
      py::arg("vars"), py::arg("pi"), py::arg("omega"));

  m.def(
      "find_counter_env",
      [](const std::string& lhs, const std::string& rhs, const std::vector<std::string>& avars, int arity, Loc locs,
         std::vector<Val> vals, int gens, std::size_t heap_size) -> py::object {
        const auto av = avar_set(avars);
        const SearchBudget b{locs, std::move(vals), gens, heap_size, 1};
        const SearchReport r = find_counter_env(parse_assertion(lhs, av), parse_assertion(rhs, av), {}, arity, b, {});
        if (!r.found) return py::none();
        py::dict d;
        d["rho"] = to_string(r.found->rho);
        d["witness"] = to_string(r.found->witness);
        d["candidates"] = r.candidates;
        return d;
      },
      py::arg("lhs"), py::arg("rhs"), py::arg("avars"), py::arg("arity") = 2, py::arg("locs") = 3,
      py::arg("vals") = std::vector<Val>{0}, py::arg("gens") = 2, py::arg("heap_size") = 1);

  m.def(
      "exec_command",
      [](const std::string& cmd, const std::string& heap) -> py::object {
        const auto out = exec(*parse_command(cmd), {}, {}, parse_heap(heap));
        if (!out) return py::none();
        return py::str(to_string(*out));
      },
      py::arg("command"), py::arg("heap"), "Runs a module-free command; None is a memory error.");

  m.def(
      "run_scenario",
      [](const std::string& text) {
        const Scenario s = parse_scenario(text);
        const ScenarioReport r = run_scenario(s);
        py::dict d;
        d["proof"] = r.proof ? py::object(py::str(r.proof->summary())) : py::none();
        d["proof_accepted"] = r.proof ? py::object(py::bool_(r.proof->accepted)) : py::none();
        d["violated"] = r.validity.violated;
        d["validity"] = r.validity.summary(s.context);
        return d;
      },
      py::arg("text"));

  m.def("scenario_names", &builtin_scenarios);
  m.def("scenario_text", &builtin_scenario_text, py::arg("name"));
  m.def(
      "demo",
      [](const std::string& name) {
        const DemoResult r = demo(name);
        return py::make_tuple(r.ok, r.report);
      },
      py::arg("name"));
}
