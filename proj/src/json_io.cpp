#include "relnet/json_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace relnet {
namespace {

using nlohmann::json;

LifetimeDistribution parse_lifetime(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "always_on")
      return LifetimeDistribution::always_on();
    throw SchemaError(where + ": unknown lifetime '" + j.get<std::string>() +
                      "'");
  }
  if (j.is_object()) {
    if (j.contains("exponential")) {
      double mean = j.at("exponential").at("mean").get<double>();
      if (mean <= 0.0) throw SchemaError(where + ": exponential mean must be > 0");
      return LifetimeDistribution::exponential(mean);
    }
    if (j.contains("bernoulli")) {
      double p = j.at("bernoulli").at("p").get<double>();
      if (p < 0.0 || p > 1.0)
        throw SchemaError(where + ": bernoulli p outside [0,1]");
      return LifetimeDistribution::bernoulli(p);
    }
  }
  throw SchemaError(where + ": malformed lifetime");
}

json lifetime_json(const LifetimeDistribution& d) {
  switch (d.kind) {
    case LifetimeDistribution::Kind::AlwaysOn: return "always_on";
    case LifetimeDistribution::Kind::Exponential:
      return {{"exponential", {{"mean", d.mean}}}};
    case LifetimeDistribution::Kind::Bernoulli:
      return {{"bernoulli", {{"p", d.survive_prob}}}};
  }
  return "always_on";
}

NodeRole parse_role(const std::string& s, const std::string& where) {
  if (s == "source") return NodeRole::Source;
  if (s == "sink") return NodeRole::Sink;
  if (s == "relay") return NodeRole::Relay;
  throw SchemaError(where + ": unknown role '" + s + "'");
}

}  // namespace

Network parse_network(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("network JSON parse error: ") + e.what());
  }
  try {
    std::string name = j.value("name", "");
    std::vector<Node> nodes;
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<std::string>();
      n.role = parse_role(jn.at("role").get<std::string>(), "node " + n.id);
      n.d = jn.value("d", 0.0);
      if (jn.contains("control") && !jn.at("control").is_null()) {
        n.controllable = true;
        n.control_lower = jn.at("control").at("lower").get<double>();
        n.control_upper = jn.at("control").at("upper").get<double>();
        if (jn.at("control").contains("menu_upper"))
          n.control_menu_upper = jn.at("control").at("menu_upper").get<double>();
      }
      if (jn.contains("lifetime"))
        n.lifetime = parse_lifetime(jn.at("lifetime"), "node " + n.id);
      nodes.push_back(std::move(n));
    }
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.id = je.at("id").get<std::string>();
      e.tail = je.at("tail").get<std::string>();
      e.head = je.at("head").get<std::string>();
      e.flow_lower = je.at("flow").at("lower").get<double>();
      e.flow_upper = je.at("flow").at("upper").get<double>();
      if (je.at("flow").contains("menu_upper"))
        e.cap_menu_upper = je.at("flow").at("menu_upper").get<double>();
      if (je.contains("lifetime"))
        e.lifetime = parse_lifetime(je.at("lifetime"), "edge " + e.id);
      e.is_candidate = je.value("candidate", false);
      e.capital_cost = je.value("capital_cost", 0.0);
      edges.push_back(std::move(e));
    }
    return Network(std::move(name), std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("network schema violation: ") + e.what());
  }
}

std::string serialize_network(const Network& network) {
  json j;
  j["name"] = network.name();
  j["nodes"] = json::array();
  for (const auto& n : network.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["role"] = n.role == NodeRole::Source
                     ? "source"
                     : (n.role == NodeRole::Sink ? "sink" : "relay");
    jn["d"] = n.d;
    if (n.controllable) {
      jn["control"] = {{"lower", n.control_lower}, {"upper", n.control_upper}};
      if (n.control_menu_upper >= 0.0)
        jn["control"]["menu_upper"] = n.control_menu_upper;
    } else {
      jn["control"] = nullptr;
    }
    jn["lifetime"] = lifetime_json(n.lifetime);
    j["nodes"].push_back(std::move(jn));
  }
  j["edges"] = json::array();
  for (const auto& e : network.edges()) {
    json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["flow"] = {{"lower", e.flow_lower}, {"upper", e.flow_upper}};
    if (e.cap_menu_upper >= 0.0) je["flow"]["menu_upper"] = e.cap_menu_upper;
    je["lifetime"] = lifetime_json(e.lifetime);
    je["candidate"] = e.is_candidate;
    je["capital_cost"] = e.capital_cost;
    j["edges"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

RbdExpr parse_rbd(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("RBD JSON parse error: ") + e.what());
  }
  std::function<RbdExpr(const json&)> build = [&](const json& j) -> RbdExpr {
    if (!j.is_object()) throw SchemaError("RBD node must be an object");
    if (j.contains("component")) {
      const auto& c = j.at("component");
      std::string id = c.at("id").get<std::string>();
      if (c.contains("reliability"))
        return RbdExpr::component(id, c.at("reliability").get<double>());
      double mean = c.at("mean_life").get<double>();
      double t = c.at("eval_time").get<double>();
      return RbdExpr::component(id, LifetimeDistribution::exponential(mean), t);
    }
    for (const char* kind : {"series", "parallel"}) {
      if (!j.contains(kind)) continue;
      std::vector<RbdExpr> children;
      for (const auto& cj : j.at(kind)) children.push_back(build(cj));
      if (children.empty())
        throw SchemaError(std::string(kind) + " block with no children");
      return kind == std::string("series") ? RbdExpr::series(std::move(children))
                                           : RbdExpr::parallel(std::move(children));
    }
    throw SchemaError("RBD node must be component/series/parallel");
  };
  return build(root);
}

std::string serialize_scenarios(const ScenarioSet& set) {
  json arr = json::array();
  for (const auto& sc : set.scenarios) {
    json j;
    j["k"] = sc.index;
    j["xi_nodes"] = std::vector<int>(sc.xi_nodes.begin(), sc.xi_nodes.end());
    j["xi_edges"] = std::vector<int>(sc.xi_edges.begin(), sc.xi_edges.end());
    arr.push_back(std::move(j));
  }
  return arr.dump() + "\n";
}

ScenarioSet parse_scenarios(const std::string& json_text) {
  json arr;
  try {
    arr = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario JSON parse error: ") + e.what());
  }
  ScenarioSet set;
  for (const auto& j : arr) {
    Scenario sc;
    sc.index = j.at("k").get<int>();
    for (int v : j.at("xi_nodes")) sc.xi_nodes.push_back(v != 0);
    for (int v : j.at("xi_edges")) sc.xi_edges.push_back(v != 0);
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

Network load_network_file(const std::string& path) {
  return parse_network(read_file(path));
}

RbdExpr load_rbd_file(const std::string& path) {
  return parse_rbd(read_file(path));
}

}  // namespace relnet
