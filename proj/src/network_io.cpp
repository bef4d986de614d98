#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rplan/error.hpp"
#include "rplan/network.hpp"

namespace rplan {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError(std::string("missing key '") + key + "' in " + where);
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) {
    throw InputError(std::string("key '") + key + "' in " + where +
                     " must be a string");
  }
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    throw InputError(std::string("key '") + key + "' in " + where +
                     " must be a number");
  }
  return v.get<double>();
}

}  // namespace

FiberNetwork load_network(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("network JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("network document must be an object");
  const json& nodes = require(doc, "nodes", "network");
  const json& fibers = require(doc, "fibers", "network");
  if (!nodes.is_array()) throw InputError("'nodes' must be an array");
  if (!fibers.is_array()) throw InputError("'fibers' must be an array");

  std::vector<NodeSpec> node_specs;
  node_specs.reserve(nodes.size());
  for (const json& n : nodes) {
    if (!n.is_object()) throw InputError("node entry must be an object");
    NodeSpec spec;
    spec.id = require_string(n, "id", "node");
    std::string type = require_string(n, "type", "node");
    if (type == "end") {
      spec.role = NodeRole::End;
    } else if (type == "repeater") {
      spec.role = NodeRole::Repeater;
    } else {
      throw InputError("node '" + spec.id + "' has unknown type '" + type + "'");
    }
    bool has_x = n.contains("x");
    bool has_y = n.contains("y");
    if (has_x != has_y) {
      throw InputError("node '" + spec.id + "' must give both x and y or neither");
    }
    if (has_x) {
      spec.position = Point{require_number(n, "x", "node"),
                            require_number(n, "y", "node")};
    }
    node_specs.push_back(std::move(spec));
  }

  std::vector<FiberSpec> fiber_specs;
  fiber_specs.reserve(fibers.size());
  for (const json& f : fibers) {
    if (!f.is_object()) throw InputError("fiber entry must be an object");
    fiber_specs.push_back({require_string(f, "a", "fiber"),
                           require_string(f, "b", "fiber"),
                           require_number(f, "length_km", "fiber")});
  }
  return FiberNetwork(std::move(node_specs), std::move(fiber_specs));
}

FiberNetwork load_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open network file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_network(buf.str());
}

std::string network_to_json(const FiberNetwork& net) {
  json doc;
  json nodes = json::array();
  for (NodeIndex i = 0; i < net.node_count(); ++i) {
    const NodeSpec& n = net.node(i);
    json entry = {{"id", n.id}, {"type", n.role == NodeRole::End ? "end" : "repeater"}};
    if (n.position) {
      entry["x"] = n.position->x;
      entry["y"] = n.position->y;
    }
    nodes.push_back(std::move(entry));
  }
  json fibers = json::array();
  for (const Fiber& f : net.fibers()) {
    fibers.push_back({{"a", net.id(f.a)}, {"b", net.id(f.b)}, {"length_km", f.length_km}});
  }
  doc["nodes"] = std::move(nodes);
  doc["fibers"] = std::move(fibers);
  return doc.dump(2) + "\n";
}

}  // namespace rplan
