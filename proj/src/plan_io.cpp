#include <map>

#include <json.hpp>

#include "rplan/error.hpp"
#include "rplan/planner.hpp"

namespace rplan {

using json = nlohmann::ordered_json;

std::string plan_to_json(const DeploymentPlan& plan) {
  const auto& ids = plan.node_ids;
  json doc;
  json reps = json::array();
  for (NodeIndex r : plan.repeaters) reps.push_back(ids[r]);
  doc["repeaters"] = reps;

  json links = json::array();
  for (const PlanLink& l : plan.links) {
    json fibers = json::array();
    for (NodeIndex h : l.hops) fibers.push_back(ids[h]);
    links.push_back({{"u", ids[l.u]}, {"v", ids[l.v]}, {"length_km", l.length_km}, {"fibers", fibers}});
  }
  doc["elementary_links"] = links;

  json paths = json::array();
  for (const PlanPath& p : plan.paths) {
    json pl = json::array();
    for (std::size_t li : p.links) pl.push_back({ids[plan.links[li].u], ids[plan.links[li].v]});
    json nodes = json::array();
    for (NodeIndex u : p.nodes) nodes.push_back(ids[u]);
    paths.push_back({{"s", ids[plan.pairs[p.pair].s]},
                     {"t", ids[plan.pairs[p.pair].t]},
                     {"k", p.k},
                     {"nodes", nodes},
                     {"links", pl}});
  }
  doc["paths"] = paths;
  doc["metrics"] = {{"repeater_count", plan.metrics.repeater_count},
                    {"connectivity", plan.metrics.connectivity}};

  const PlanProvenance& pv = plan.provenance;
  json pairs = json::array();
  for (const PlanPair& p : plan.pairs) {
    pairs.push_back({{"s", ids[p.s]},
                     {"t", ids[p.t]},
                     {"k", p.params.k},
                     {"n_max", p.params.n_max},
                     {"l_max_km", p.params.l_max_km}});
  }
  json capacity = json::object();
  for (std::size_t u = 0; u < plan.node_d.size(); ++u) {
    if (plan.node_d[u] > 0) capacity[ids[u]] = plan.node_d[u];
  }
  doc["provenance"] = {{"seed", pv.seed},
                       {"formulation", formulation_name(pv.formulation)},
                       {"n_max", pv.base_bounds.n_max},
                       {"l_max_km", pv.base_bounds.l_max_km},
                       {"alpha", pv.alpha},
                       {"objective", pv.objective},
                       {"solver_nodes", pv.solver_nodes},
                       {"variables", pv.variables},
                       {"constraints", pv.constraints},
                       {"pairs", pairs},
                       {"capacity", capacity}};
  return doc.dump(2) + "\n";
}

namespace {

const json& field(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(std::string(where) + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

std::string str(const json& obj, const char* key, const char* where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw InputError(std::string(where) + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double num(const json& obj, const char* key, const char* where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw InputError(std::string(where) + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const char* where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) {
    throw InputError(std::string(where) + ": \"" + key + "\" must be an integer");
  }
  return v.get<int>();
}

const json& array(const json& obj, const char* key, const char* where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw InputError(std::string(where) + ": \"" + key + "\" must be an array");
  return v;
}

}  // namespace

namespace {

DeploymentPlan plan_from_doc(const FiberNetwork& net, const json& doc) {
  auto node = [&](const std::string& id) {
    auto i = net.find(id);
    if (!i) throw InputError("plan names unknown node '" + id + "'");
    return *i;
  };
  auto node_of = [&](const json& v, const char* where) {
    if (!v.is_string()) throw InputError(std::string(where) + ": node ids must be strings");
    return node(v.get<std::string>());
  };

  DeploymentPlan plan;
  for (NodeIndex i = 0; i < net.node_count(); ++i) plan.node_ids.push_back(net.id(i));
  for (const json& r : array(doc, "repeaters", "plan")) plan.repeaters.push_back(node_of(r, "repeaters"));

  std::map<std::pair<NodeIndex, NodeIndex>, std::size_t> link_slot;
  for (const json& l : array(doc, "elementary_links", "plan")) {
    PlanLink pl{node(str(l, "u", "link")), node(str(l, "v", "link")), num(l, "length_km", "link"), {}};
    for (const json& h : array(l, "fibers", "link")) pl.hops.push_back(node_of(h, "link fibers"));
    link_slot[{pl.u, pl.v}] = plan.links.size();
    plan.links.push_back(std::move(pl));
  }

  const json& pv = field(doc, "provenance", "plan");
  std::map<std::pair<NodeIndex, NodeIndex>, std::size_t> pair_slot;
  for (const json& p : array(pv, "pairs", "provenance")) {
    PlanPair pp{node(str(p, "s", "pair")), node(str(p, "t", "pair")),
                PairParams{integer(p, "k", "pair"), integer(p, "n_max", "pair"),
                           num(p, "l_max_km", "pair")}};
    pair_slot[{pp.s, pp.t}] = plan.pairs.size();
    plan.pairs.push_back(pp);
  }
  plan.node_d.assign(net.node_count(), 0);
  const json& cap = field(pv, "capacity", "provenance");
  if (!cap.is_object()) throw InputError("provenance: \"capacity\" must be an object");
  for (const auto& [id, d] : cap.items()) {
    if (!d.is_number_integer()) throw InputError("provenance: capacity values must be integers");
    plan.node_d[node(id)] = d.get<int>();
  }

  for (const json& p : array(doc, "paths", "plan")) {
    const NodeIndex s = node(str(p, "s", "path"));
    const NodeIndex t = node(str(p, "t", "path"));
    auto ps = pair_slot.find({s, t});
    if (ps == pair_slot.end()) throw InputError("path for an unlisted pair " + net.id(s) + " -> " + net.id(t));
    PlanPath pp{ps->second, integer(p, "k", "path"), {}, {}};
    for (const json& u : array(p, "nodes", "path")) pp.nodes.push_back(node_of(u, "path nodes"));
    for (const json& l : array(p, "links", "path")) {
      if (!l.is_array() || l.size() != 2) throw InputError("path links must be [u, v] pairs");
      auto it = link_slot.find({node_of(l[0], "path links"), node_of(l[1], "path links")});
      if (it == link_slot.end()) throw InputError("path uses an unlisted elementary link");
      pp.links.push_back(it->second);
    }
    plan.paths.push_back(std::move(pp));
  }

  const json& m = field(doc, "metrics", "plan");
  plan.metrics.repeater_count = static_cast<std::size_t>(integer(m, "repeater_count", "metrics"));
  plan.metrics.connectivity = integer(m, "connectivity", "metrics");
  plan.provenance.seed = field(pv, "seed", "provenance").get<std::uint64_t>();
  plan.provenance.formulation = parse_formulation(str(pv, "formulation", "provenance"));
  plan.provenance.base_bounds.n_max = integer(pv, "n_max", "provenance");
  plan.provenance.base_bounds.l_max_km = num(pv, "l_max_km", "provenance");
  plan.provenance.alpha = num(pv, "alpha", "provenance");
  plan.provenance.objective = num(pv, "objective", "provenance");
  if (pv.contains("solver_nodes")) plan.provenance.solver_nodes = integer(pv, "solver_nodes", "provenance");
  if (pv.contains("variables")) plan.provenance.variables = static_cast<std::size_t>(integer(pv, "variables", "provenance"));
  if (pv.contains("constraints")) {
    plan.provenance.constraints = static_cast<std::size_t>(integer(pv, "constraints", "provenance"));
  }
  return plan;
}

}  // namespace

DeploymentPlan plan_from_json(const FiberNetwork& net, std::string_view text) {
  try {
    return plan_from_doc(net, json::parse(text));
  } catch (const json::exception& e) {
    throw InputError(std::string("plan: invalid JSON: ") + e.what());
  }
}

}  // namespace rplan
