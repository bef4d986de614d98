#include "rplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "rplan/analysis.hpp"
#include "rplan/error.hpp"

namespace rplan {

namespace {

bool is_one(const Assignment& a, VarIndex v) { return a.values[v] > 0.5; }

[[noreturn]] void corrupt(const std::string& what) {
  throw std::logic_error("corrupt assignment: " + what);
}

// Position of link `l` inside pair_links(q), which is sorted by (u, v).
std::size_t position_in_pair(const CandidateLinkSet& links, std::size_t q, LinkIndex l) {
  auto pl = links.pair_links(q);
  const CandidateLink& key = links.link(l);
  auto it = std::lower_bound(pl.begin(), pl.end(), key, [&](LinkIndex a, const CandidateLink& k) {
    const CandidateLink& x = links.link(a);
    return x.u != k.u ? x.u < k.u : x.v < k.v;
  });
  if (it == pl.end() || *it != l) {
    throw std::logic_error("link is not a candidate of pair " + links.pair_label(q));
  }
  return static_cast<std::size_t>(it - pl.begin());
}

std::string pair_label(const FiberNetwork& net, NodeIndex s, NodeIndex t) {
  return net.id(s) + " -> " + net.id(t);
}

}  // namespace

std::vector<ExtractedPath> extract_paths(const FormulationArtifacts& f,
                                         const CandidateLinkSet& links,
                                         const Assignment& a) {
  if (f.kind == FormulationKind::PathBased) {
    throw std::invalid_argument("extract_paths needs a link-based model");
  }
  std::vector<ExtractedPath> out;
  std::vector<std::int64_t> next(links.node_count(), -1);
  std::vector<char> seen(links.node_count(), 0);
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    auto pl = links.pair_links(q);
    const NodeIndex s = links.pairs()[q].s;
    const NodeIndex t = links.pairs()[q].t;
    for (int k = 1; k <= f.params.pairs[q].k; ++k) {
      std::vector<NodeIndex> touched;
      for (std::size_t pos = 0; pos < pl.size(); ++pos) {
        if (!is_one(a, f.link_var(q, k, pos))) continue;
        const NodeIndex u = links.link(pl[pos]).u;
        if (next[u] >= 0) {
          corrupt("two outgoing links at " + links.id(u) + " for " + links.pair_label(q) +
                  ", k=" + std::to_string(k));
        }
        next[u] = static_cast<std::int64_t>(pos);
        touched.push_back(u);
      }
      ExtractedPath p{q, k, {}, {s}};
      NodeIndex cur = s;
      seen[s] = 1;
      while (cur != t) {
        if (next[cur] < 0) {
          corrupt("no outgoing link at " + links.id(cur) + " for " + links.pair_label(q) +
                  ", k=" + std::to_string(k));
        }
        const LinkIndex l = pl[static_cast<std::size_t>(next[cur])];
        cur = links.link(l).v;
        if (seen[cur]) corrupt("walk revisits " + links.id(cur));
        seen[cur] = 1;
        p.links.push_back(l);
        p.nodes.push_back(cur);
      }
      for (NodeIndex u : touched) next[u] = -1;
      for (NodeIndex u : p.nodes) seen[u] = 0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

Assignment remove_loops(const FormulationArtifacts& f, const CandidateLinkSet& links,
                        const Assignment& a, const std::vector<ExtractedPath>& paths) {
  std::vector<double> x = a.values;
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const std::size_t size = links.pair_links(q).size();
    for (int k = 1; k <= f.params.pairs[q].k; ++k) {
      for (std::size_t pos = 0; pos < size; ++pos) x[f.link_var(q, k, pos)] = 0.0;
    }
  }
  for (const ExtractedPath& p : paths) {
    for (LinkIndex l : p.links) x[f.link_var(p.pair, p.k, position_in_pair(links, p.pair, l))] = 1.0;
  }
  return make_assignment(f.model, std::move(x));
}

std::vector<ExtractedPath> chosen_paths(const FormulationArtifacts& f, const Assignment& a) {
  if (f.kind != FormulationKind::PathBased) {
    throw std::invalid_argument("chosen_paths needs a path-based model");
  }
  std::vector<ExtractedPath> out;
  for (std::size_t q = 0; q < f.catalog.per_pair.size(); ++q) {
    int k = 0;
    for (std::size_t i = 0; i < f.catalog.per_pair[q].size(); ++i) {
      if (!is_one(a, f.path_vars[q][i])) continue;
      const Path& p = f.catalog.per_pair[q][i];
      out.push_back(ExtractedPath{q, ++k, p.links, p.nodes});
    }
    if (k != f.params.pairs[q].k) corrupt("pair " + std::to_string(q) + " has " +
                                          std::to_string(k) + " chosen paths");
  }
  return out;
}

Assignment link_to_path_assignment(const FormulationArtifacts& link_model,
                                   const CandidateLinkSet& links,
                                   const Assignment& link_solution,
                                   const FormulationArtifacts& path_model) {
  std::vector<std::map<std::vector<LinkIndex>, VarIndex>> by_links(path_model.catalog.per_pair.size());
  for (std::size_t q = 0; q < by_links.size(); ++q) {
    for (std::size_t i = 0; i < path_model.catalog.per_pair[q].size(); ++i) {
      by_links[q].emplace(path_model.catalog.per_pair[q][i].links, path_model.path_vars[q][i]);
    }
  }
  std::vector<double> x(path_model.model.var_count(), 0.0);
  for (const ExtractedPath& p : extract_paths(link_model, links, link_solution)) {
    auto it = by_links[p.pair].find(p.links);
    if (it == by_links[p.pair].end()) {
      throw std::logic_error("extracted path of " + links.pair_label(p.pair) +
                             " is missing from the path catalog");
    }
    x[it->second] = 1.0;
  }
  for (std::size_t i = 0; i < path_model.repeater_nodes.size(); ++i) {
    auto yl = link_model.y_var(path_model.repeater_nodes[i]);
    if (yl) x[path_model.y_vars[i]] = link_solution.values[*yl];
  }
  return make_assignment(path_model.model, std::move(x));
}

Assignment path_to_link_assignment(const FormulationArtifacts& path_model,
                                   const Assignment& path_solution,
                                   const FormulationArtifacts& link_model,
                                   const CandidateLinkSet& links) {
  std::vector<double> x(link_model.model.var_count(), 0.0);
  for (const ExtractedPath& p : chosen_paths(path_model, path_solution)) {
    for (LinkIndex l : p.links) {
      x[link_model.link_var(p.pair, p.k, position_in_pair(links, p.pair, l))] = 1.0;
    }
  }
  for (std::size_t i = 0; i < link_model.repeater_nodes.size(); ++i) {
    auto yp = path_model.y_var(link_model.repeater_nodes[i]);
    if (yp) x[link_model.y_vars[i]] = path_solution.values[*yp];
  }
  return make_assignment(link_model.model, std::move(x));
}

namespace {

// Hop-limited reachability over admissible links of pair q.
bool has_admissible_path(const CandidateLinkSet& links, std::size_t q, const PairParams& p) {
  const NodeIndex s = links.pairs()[q].s;
  const NodeIndex t = links.pairs()[q].t;
  std::vector<int> depth(links.node_count(), -1);
  std::vector<NodeIndex> frontier{s};
  depth[s] = 0;
  auto pl = links.pair_links(q);
  for (int h = 1; h <= p.n_max + 1 && !frontier.empty(); ++h) {
    std::vector<NodeIndex> next;
    for (LinkIndex l : pl) {
      const CandidateLink& c = links.link(l);
      if (c.length_km > p.l_max_km) continue;
      if (depth[c.u] != h - 1 || depth[c.v] >= 0) continue;
      if (c.v == t) return true;
      depth[c.v] = h;
      next.push_back(c.v);
    }
    frontier.swap(next);
  }
  return false;
}

// Counting arguments that rule out an instance before any LP is built: each
// pair needs K disjoint admissible first and last links, and all paths but
// one direct link per pair need repeater capacity.
void quick_checks(const FiberNetwork& net, const CandidateLinkSet& links,
                  const ResolvedRequirements& req) {
  std::vector<std::string> short_pairs;
  std::int64_t demand = 0;
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const NodeIndex s = links.pairs()[q].s;
    const NodeIndex t = links.pairs()[q].t;
    const PairParams& p = req.pairs[q];
    int out_s = 0;
    int in_t = 0;
    bool direct = false;
    for (LinkIndex l : links.pair_links(q)) {
      const CandidateLink& c = links.link(l);
      if (c.length_km > p.l_max_km) continue;
      if (c.u == s && c.v == t) direct = true;
      if (c.u == s) ++out_s;
      if (c.v == t) ++in_t;
    }
    if (std::min(out_s, in_t) < p.k) short_pairs.push_back(pair_label(net, s, t));
    demand += p.k - (direct ? 1 : 0);
  }
  if (!short_pairs.empty()) {
    throw InfeasibleError("ilp", "insufficient disjoint admissible paths", std::move(short_pairs));
  }
  std::int64_t capacity = 0;
  for (NodeIndex u : links.repeater_locations()) capacity += req.node_d[u];
  if (demand > capacity) {
    throw InfeasibleError("ilp", "repeater capacity too small",
                          {std::to_string(demand) + " paths need a repeater slot, " +
                           std::to_string(capacity) + " slots exist"});
  }
}

FormulationArtifacts build(FormulationKind kind, const CandidateLinkSet& links,
                           const ResolvedRequirements& req, const PlanOptions& options) {
  switch (kind) {
    case FormulationKind::PathBased:
      return build_path_based(links, enumerate_paths(links, req, options.path_options), req,
                              options.formulation_options);
    case FormulationKind::LinkBased:
      return build_link_based(links, req, options.formulation_options);
    case FormulationKind::Generalized:
      return build_generalized(links, req, options.formulation_options);
  }
  throw std::invalid_argument("unknown formulation");
}

SolveOptions solve_options(const FormulationArtifacts& f, const PlanOptions& options) {
  SolveOptions s = options.solve;
  if (options.branch_repeaters_first && s.branch_first.empty()) s.branch_first = f.y_vars;
  return s;
}

}  // namespace

namespace {

struct Prepared {
  EndNodePairSet pairs;
  ResolvedRequirements req;
  CandidateLinkSet links;
};

Prepared prepare(const FiberNetwork& net, const RequirementConfig& requirements,
                 const PlanOptions& options) {
  RequirementConfig config = requirements;
  if (options.n_max) config.n_max = options.n_max;
  if (options.l_max_km) config.l_max_km = options.l_max_km;
  config.base.validate();
  EndNodePairSet pairs = build_pair_set(net, options.seed, options.canonical_pairs);
  ResolvedRequirements req = resolve_requirements(config, net, pairs);
  CandidateLinkSet links = build_candidate_links(net, pairs, options.link_options);
  return Prepared{std::move(pairs), std::move(req), std::move(links)};
}

SolveResult run_solver(const FormulationArtifacts& f, const PlanOptions& options) {
  if (options.external) return solve_external(f.model, *options.external);
  return solve(f.model, solve_options(f, options));
}

}  // namespace

PlanModel build_plan_model(const FiberNetwork& net, const RequirementConfig& requirements,
                           const PlanOptions& options) {
  Prepared p = prepare(net, requirements, options);
  FormulationArtifacts f = build(options.formulation, p.links, p.req, options);
  return PlanModel{std::move(p.pairs), std::move(p.req), std::move(p.links), std::move(f)};
}

DeploymentPlan plan(const FiberNetwork& net, const RequirementConfig& requirements,
                    const PlanOptions& options) {
  const Prepared prep = prepare(net, requirements, options);
  const EndNodePairSet& pairs = prep.pairs;
  const ResolvedRequirements& req = prep.req;
  const CandidateLinkSet& links = prep.links;

  std::vector<std::string> unreachable;
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    if (!has_admissible_path(links, q, req.pairs[q])) unreachable.push_back(links.pair_label(q));
  }
  if (!unreachable.empty()) {
    throw InfeasibleError("paths", "no admissible path for pair", std::move(unreachable));
  }
  quick_checks(net, links, req);

  const FormulationArtifacts f = build(options.formulation, links, req, options);
  const SolveResult result = run_solver(f, options);
  if (result.status == SolveStatus::LimitReached) {
    throw LimitError("solver-limit: stopped after " + std::to_string(result.nodes) +
                     " nodes with dual bound " + std::to_string(result.dual_bound));
  }
  if (result.status == SolveStatus::Infeasible) {
    if (!options.diagnose) throw InfeasibleError("ilp", "no feasible repeater allocation");
    // Lift capacity: if the instance becomes feasible, D was the obstacle.
    ResolvedRequirements relaxed = req;
    int total_k = 0;
    for (const auto& p : req.pairs) total_k += p.k;
    relaxed.base_d = std::max(1, total_k);
    for (NodeIndex u : links.repeater_locations()) relaxed.node_d[u] = relaxed.base_d;
    const FormulationArtifacts g = build(options.formulation, links, relaxed, options);
    const SolveResult r2 = run_solver(g, options);
    if (r2.status == SolveStatus::Optimal) {
      throw InfeasibleError("ilp", "repeater capacity too small",
                            {"feasible when every repeater may serve all paths"});
    }
    throw InfeasibleError("ilp", "insufficient disjoint admissible paths",
                          {"infeasible even with unlimited repeater capacity"});
  }

  const Assignment& solution = *result.assignment;
  std::vector<ExtractedPath> extracted;
  if (f.kind == FormulationKind::PathBased) {
    extracted = chosen_paths(f, solution);
  } else {
    extracted = extract_paths(f, links, solution);
    const Assignment cleaned = remove_loops(f, links, solution, extracted);
    const FeasibilityReport report = evaluate(f.model, cleaned);
    if (!report.feasible) {
      throw std::logic_error("loop removal broke feasibility: " + report.messages().front());
    }
    if (remove_loops(f, links, cleaned, extracted).values != cleaned.values) {
      throw std::logic_error("loop removal is not idempotent");
    }
  }

  DeploymentPlan out;
  for (NodeIndex i = 0; i < net.node_count(); ++i) out.node_ids.push_back(net.id(i));
  for (std::size_t i = 0; i < f.repeater_nodes.size(); ++i) {
    if (is_one(solution, f.y_vars[i])) out.repeaters.push_back(f.repeater_nodes[i]);
  }
  std::set<LinkIndex> used;
  for (const auto& p : extracted) used.insert(p.links.begin(), p.links.end());
  std::vector<LinkIndex> order(used.begin(), used.end());
  std::sort(order.begin(), order.end(), [&](LinkIndex a, LinkIndex b) {
    const auto& x = links.link(a);
    const auto& y = links.link(b);
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  std::map<LinkIndex, std::size_t> slot;
  for (LinkIndex l : order) {
    slot[l] = out.links.size();
    const CandidateLink& c = links.link(l);
    out.links.push_back(PlanLink{c.u, c.v, c.length_km, c.hops});
  }
  for (const auto& p : extracted) {
    PlanPath pp{p.pair, p.k, {}, p.nodes};
    for (LinkIndex l : p.links) pp.links.push_back(slot.at(l));
    out.paths.push_back(std::move(pp));
  }
  std::sort(out.paths.begin(), out.paths.end(), [](const PlanPath& a, const PlanPath& b) {
    return a.pair != b.pair ? a.pair < b.pair : a.k < b.k;
  });
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    out.pairs.push_back(PlanPair{pairs[q].s, pairs[q].t, req.pairs[q]});
  }
  out.node_d = req.node_d;
  out.metrics.repeater_count = out.repeaters.size();
  out.metrics.connectivity = vertex_connectivity(out);
  out.provenance = PlanProvenance{options.seed, f.kind, req.base_bounds, f.alpha,
                                  result.objective, result.nodes, result.wall_ms,
                                  f.model.var_count(), f.model.constraint_count()};

  std::vector<std::string> problems = audit_plan(net, out);
  for (auto& s : robustness_check(out)) problems.push_back(std::move(s));
  if (!problems.empty()) throw std::logic_error("plan audit failed: " + problems.front());
  return out;
}

std::vector<std::string> audit_plan(const FiberNetwork& net, const DeploymentPlan& plan) {
  std::vector<std::string> v;
  auto id = [&](NodeIndex i) { return net.id(i); };
  const std::size_t n = net.node_count();
  if (plan.node_ids.size() != n) {
    v.push_back("plan node list does not match the network");
    return v;
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (plan.node_ids[i] != net.id(i)) {
      v.push_back("plan node " + plan.node_ids[i] + " does not match network node " + net.id(i));
      return v;
    }
  }
  if (plan.node_d.size() != n) {
    v.push_back("capacity list does not match the network");
    return v;
  }

  // Every unordered end-node pair exactly once.
  const auto ends = net.end_nodes();
  std::set<std::pair<NodeIndex, NodeIndex>> pair_set;
  for (const PlanPair& p : plan.pairs) {
    if (p.s >= n || p.t >= n || !net.is_end(p.s) || !net.is_end(p.t) || p.s == p.t) {
      v.push_back("pair with invalid end nodes");
      return v;
    }
    if (!pair_set.insert(std::minmax(p.s, p.t)).second) {
      v.push_back("pair " + pair_label(net, p.s, p.t) + " listed twice");
    }
  }
  if (pair_set.size() != ends.size() * (ends.size() - 1) / 2) {
    v.push_back("plan does not cover every end-node pair");
  }

  std::set<NodeIndex> repeater_set(plan.repeaters.begin(), plan.repeaters.end());
  if (repeater_set.size() != plan.repeaters.size()) v.push_back("repeater listed twice");
  for (NodeIndex r : plan.repeaters) {
    if (r >= n || net.is_end(r)) v.push_back("repeater at an end node or unknown node");
  }

  // Links: real fiber routes of shortest length, listed once.
  std::vector<NodeIndex> sources;
  for (const PlanLink& l : plan.links) {
    if (l.u < n) sources.push_back(l.u);
  }
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  const ShortestPathTable sp(net, sources);
  std::set<std::pair<NodeIndex, NodeIndex>> link_set;
  for (const PlanLink& l : plan.links) {
    if (l.u >= n || l.v >= n || l.u == l.v || l.hops.size() < 2 || l.hops.front() != l.u ||
        l.hops.back() != l.v) {
      v.push_back("malformed elementary link");
      continue;
    }
    const std::string name = id(l.u) + "-" + id(l.v);
    if (!link_set.insert({l.u, l.v}).second) v.push_back("link " + name + " listed twice");
    double len = 0.0;
    bool fibers_ok = true;
    for (std::size_t i = 0; i + 1 < l.hops.size(); ++i) {
      if (l.hops[i + 1] >= n) {
        fibers_ok = false;
        break;
      }
      auto f = net.fiber_between(l.hops[i], l.hops[i + 1]);
      if (!f) {
        fibers_ok = false;
        break;
      }
      len += net.fibers()[*f].length_km;
    }
    if (!fibers_ok) {
      v.push_back("link " + name + " follows a missing fiber");
      continue;
    }
    const double tol = 1e-9 * std::max(1.0, len);
    if (std::abs(len - l.length_km) > tol) v.push_back("link " + name + " length mismatch");
    if (std::abs(sp.distance(l.u, l.v) - l.length_km) > tol) {
      v.push_back("link " + name + " is not a shortest fiber route");
    }
  }

  std::vector<int> usage(n, 0);
  std::vector<int> link_use(plan.links.size(), 0);
  std::map<std::size_t, std::vector<const PlanPath*>> by_pair;
  for (const PlanPath& p : plan.paths) {
    if (p.pair >= plan.pairs.size()) {
      v.push_back("path names an unknown pair");
      continue;
    }
    by_pair[p.pair].push_back(&p);
  }
  for (std::size_t q = 0; q < plan.pairs.size(); ++q) {
    const PlanPair& pq = plan.pairs[q];
    const std::string label = pair_label(net, pq.s, pq.t);
    const auto& paths = by_pair[q];
    if (static_cast<int>(paths.size()) != pq.params.k) {
      v.push_back(label + ": " + std::to_string(paths.size()) + " paths, expected " +
                  std::to_string(pq.params.k));
    }
    std::set<int> ks;
    std::set<NodeIndex> interior_seen;
    std::set<std::size_t> links_seen;
    for (const PlanPath* p : paths) {
      const std::string tag = label + " k=" + std::to_string(p->k);
      if (!ks.insert(p->k).second || p->k < 1 || p->k > pq.params.k) {
        v.push_back(tag + ": bad or repeated robustness index");
      }
      if (p->nodes.size() != p->links.size() + 1 || p->nodes.front() != pq.s ||
          p->nodes.back() != pq.t) {
        v.push_back(tag + ": path does not run from s to t");
        continue;
      }
      if (p->links.size() > static_cast<std::size_t>(pq.params.n_max) + 1) {
        v.push_back(tag + ": " + std::to_string(p->links.size()) + " links exceed N_max+1");
      }
      std::set<NodeIndex> on_path;
      for (std::size_t i = 0; i < p->links.size(); ++i) {
        const std::size_t li = p->links[i];
        if (li >= plan.links.size()) {
          v.push_back(tag + ": unknown link");
          continue;
        }
        const PlanLink& l = plan.links[li];
        ++link_use[li];
        if (l.u != p->nodes[i] || l.v != p->nodes[i + 1]) {
          v.push_back(tag + ": link does not join consecutive path nodes");
        }
        if (l.length_km > pq.params.l_max_km) {
          v.push_back(tag + ": link " + id(l.u) + "-" + id(l.v) + " longer than L_max");
        }
        if (!links_seen.insert(li).second) v.push_back(tag + ": link shared with another path");
      }
      for (NodeIndex u : p->nodes) {
        if (!on_path.insert(u).second) v.push_back(tag + ": path visits a node twice");
      }
      for (std::size_t i = 1; i + 1 < p->nodes.size(); ++i) {
        const NodeIndex u = p->nodes[i];
        if (!repeater_set.count(u)) v.push_back(tag + ": passes " + id(u) + " without a repeater");
        if (!interior_seen.insert(u).second) {
          v.push_back(tag + ": repeater " + id(u) + " shared by two paths of the pair");
        }
        ++usage[u];
      }
    }
  }
  for (NodeIndex r : plan.repeaters) {
    if (r >= n) continue;
    if (usage[r] > plan.node_d[r]) {
      v.push_back("repeater " + id(r) + " serves " + std::to_string(usage[r]) +
                  " paths, capacity " + std::to_string(plan.node_d[r]));
    }
    if (usage[r] == 0) v.push_back("repeater " + id(r) + " is on no path");
  }
  for (std::size_t i = 0; i < plan.links.size(); ++i) {
    if (link_use[i] == 0) v.push_back("link " + id(plan.links[i].u) + "-" + id(plan.links[i].v) + " is on no path");
  }
  if (plan.metrics.repeater_count != plan.repeaters.size()) v.push_back("repeater count metric mismatch");
  if (v.empty() && plan.metrics.connectivity != vertex_connectivity(plan)) {
    v.push_back("connectivity metric mismatch");
  }
  return v;
}

std::vector<std::string> robustness_check(const DeploymentPlan& plan) {
  std::vector<std::string> v;
  auto check = [&](const std::string& what, auto&& broken) {
    for (std::size_t q = 0; q < plan.pairs.size(); ++q) {
      int intact = 0;
      for (const PlanPath& p : plan.paths) {
        if (p.pair == q && !broken(p)) ++intact;
      }
      if (intact < plan.pairs[q].params.k - 1) {
        v.push_back("losing " + what + " leaves " + plan.node_ids[plan.pairs[q].s] + " -> " +
                    plan.node_ids[plan.pairs[q].t] + " with " + std::to_string(intact) + " paths");
      }
    }
  };
  for (NodeIndex r : plan.repeaters) {
    check("repeater " + plan.node_ids[r], [&](const PlanPath& p) {
      return std::find(p.nodes.begin(), p.nodes.end(), r) != p.nodes.end();
    });
  }
  for (std::size_t i = 0; i < plan.links.size(); ++i) {
    check("link " + plan.node_ids[plan.links[i].u] + "-" + plan.node_ids[plan.links[i].v],
          [&](const PlanPath& p) {
            return std::find(p.links.begin(), p.links.end(), i) != p.links.end();
          });
  }
  return v;
}

}  // namespace rplan
