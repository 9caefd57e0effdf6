// Python bindings: thin wrappers over the C++ toolkit.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relnet/design.hpp"
#include "relnet/json_io.hpp"
#include "relnet/rbd.hpp"
#include "relnet/reliability.hpp"

namespace py = pybind11;
using namespace relnet;

namespace {

LogicSpec logic_from(const std::optional<std::vector<std::string>>& required) {
  if (!required) return LogicSpec::all_sinks();
  return LogicSpec::subset({required->begin(), required->end()});
}

}  // namespace

PYBIND11_MODULE(_relnet, m) {
  m.doc() = "network reliability toolkit";

  py::register_exception<SchemaError>(m, "SchemaError");
  py::register_exception<DesignLimitError>(m, "DesignLimitError");

  py::class_<Network>(m, "Network")
      .def_property_readonly("name", &Network::name)
      .def_property_readonly("num_nodes",
                             [](const Network& n) { return n.nodes().size(); })
      .def_property_readonly("num_edges",
                             [](const Network& n) { return n.edges().size(); })
      .def("node_ids",
           [](const Network& n) {
             std::vector<std::string> ids;
             for (const auto& nd : n.nodes()) ids.push_back(nd.id);
             return ids;
           })
      .def("edge_ids",
           [](const Network& n) {
             std::vector<std::string> ids;
             for (const auto& ed : n.edges()) ids.push_back(ed.id);
             return ids;
           })
      .def("validate", &Network::validate)
      .def("to_json", [](const Network& n) { return serialize_network(n); })
      .def("__repr__", [](const Network& n) {
        return "<Network '" + n.name() + "', " +
               std::to_string(n.nodes().size()) + " nodes, " +
               std::to_string(n.edges().size()) + " edges>";
      });

  py::class_<ScenarioSet>(m, "ScenarioSet")
      .def_property_readonly(
          "size", [](const ScenarioSet& s) { return s.scenarios.size(); })
      .def_readonly("seed", &ScenarioSet::seed)
      .def_readonly("threshold_years", &ScenarioSet::threshold_years);

  py::class_<ReliabilityEstimate>(m, "ReliabilityEstimate")
      .def_readonly("value", &ReliabilityEstimate::value)
      .def_readonly("samples", &ReliabilityEstimate::samples)
      .def_readonly("standard_error", &ReliabilityEstimate::standard_error)
      .def("__repr__", [](const ReliabilityEstimate& e) {
        return "<ReliabilityEstimate " + std::to_string(e.value) + " +- " +
               std::to_string(e.standard_error) + ">";
      });

  py::class_<RbdExpr>(m, "RbdExpr");

  py::class_<DesignResult>(m, "DesignResult")
      .def_readonly("reliability", &DesignResult::reliability)
      .def_readonly("cost", &DesignResult::cost)
      .def_readonly("chosen_edges", &DesignResult::chosen_edges)
      .def_readonly("flow_caps", &DesignResult::flow_caps)
      .def_readonly("control_caps", &DesignResult::control_caps)
      .def_readonly("relaxed_objective", &DesignResult::relaxed_objective)
      .def_readonly("solve_seconds", &DesignResult::solve_seconds);

  m.def("parse_network", &parse_network, py::arg("json_text"));
  m.def("load_network", &load_network_file, py::arg("path"));
  m.def("parse_rbd", &parse_rbd, py::arg("json_text"));
  m.def("load_rbd", &load_rbd_file, py::arg("path"));
  m.def("eval_rbd", &eval_rbd, py::arg("expr"));
  m.def("rbd_to_network", &rbd_to_network, py::arg("expr"));

  m.def("sample_scenarios", &sample_scenarios, py::arg("network"),
        py::arg("count"), py::arg("threshold_years"), py::arg("seed") = 1);

  m.def(
      "estimate_reliability",
      [](const Network& net, const ScenarioSet& set, bool milp, int workers,
         const std::optional<std::vector<std::string>>& required) {
        return estimate_reliability(net, set, logic_from(required), milp,
                                    workers);
      },
      py::arg("network"), py::arg("scenarios"), py::arg("milp") = true,
      py::arg("workers") = 1, py::arg("required") = py::none(),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_design",
      [](const Network& net, const ScenarioSet& set, double budget,
         bool relaxed, bool topology, int workers,
         const std::optional<std::vector<std::string>>& required) {
        DesignProblem prob;
        prob.network = net;
        prob.scenarios = set;
        prob.budget = budget;
        prob.relaxed = relaxed;
        prob.enable_topology = topology;
        prob.workers = workers;
        prob.logic = logic_from(required);
        return solve_design(prob);
      },
      py::arg("network"), py::arg("scenarios"), py::arg("budget"),
      py::arg("relaxed") = false, py::arg("topology") = false,
      py::arg("workers") = 1, py::arg("required") = py::none(),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "pareto",
      [](const Network& net, const ScenarioSet& set,
         const std::vector<double>& budgets, bool relaxed, bool topology,
         int workers) {
        DesignProblem prob;
        prob.network = net;
        prob.scenarios = set;
        prob.relaxed = relaxed;
        prob.enable_topology = topology;
        prob.workers = workers;
        ParetoFrontier front = pareto_sweep(prob, budgets);
        std::vector<std::map<std::string, double>> rows;
        for (const auto& p : front.pairs)
          rows.push_back({{"budget", p.budget},
                          {"cost", p.cost},
                          {"reliability", p.reliability}});
        return rows;
      },
      py::arg("network"), py::arg("scenarios"), py::arg("budgets"),
      py::arg("relaxed") = false, py::arg("topology") = false,
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("apply_design", &apply_design, py::arg("network"), py::arg("result"));
  m.def("active_difference", &active_difference, py::arg("exact"),
        py::arg("relaxed"));
}
