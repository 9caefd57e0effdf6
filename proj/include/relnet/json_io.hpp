#pragma once
#include <string>

#include "relnet/graph.hpp"
#include "relnet/rbd.hpp"
#include "relnet/scenario.hpp"

namespace relnet {

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

Network parse_network(const std::string& json_text);
std::string serialize_network(const Network& network);
Network load_network_file(const std::string& path);

// {"series": [...]} / {"parallel": [...]} /
// {"component": {"id":..., "mean_life":..., "eval_time":...}} or
// {"component": {"id":..., "reliability":...}}
RbdExpr parse_rbd(const std::string& json_text);
RbdExpr load_rbd_file(const std::string& path);

// JSON array of {k, xi_nodes: [0/1...], xi_edges: [0/1...]}
std::string serialize_scenarios(const ScenarioSet& set);
ScenarioSet parse_scenarios(const std::string& json_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace relnet
