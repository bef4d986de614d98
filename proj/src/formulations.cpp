#include "rplan/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rplan/error.hpp"

namespace rplan {

double Path::max_link_km(const CandidateLinkSet& set) const {
  double m = 0.0;
  for (LinkIndex l : links) m = std::max(m, set.link(l).length_km);
  return m;
}

double Path::length_km(const CandidateLinkSet& set) const {
  double total = 0.0;
  for (LinkIndex l : links) total += set.link(l).length_km;
  return total;
}

bool Path::admissible(const CandidateLinkSet& set, const PairParams& p) const {
  return hop_count() <= static_cast<std::size_t>(p.n_max) + 1 &&
         max_link_km(set) <= p.l_max_km;
}

std::size_t PathCatalog::total() const {
  std::size_t n = 0;
  for (const auto& pq : per_pair) n += pq.size();
  return n;
}

namespace {

struct Enumerator {
  const CandidateLinkSet& set;
  const PairParams& params;
  bool prune;
  std::size_t cap;
  std::size_t& total;
  std::size_t q;
  NodeIndex t;
  std::vector<NodeIndex> heads;  // R u {t}, ascending
  std::vector<char> visited;
  Path current;
  std::vector<Path>& out;

  void dfs(NodeIndex u) {
    const std::size_t depth = current.links.size();
    for (NodeIndex v : heads) {
      if (visited[v]) continue;
      if (prune) {
        std::size_t needed = depth + (v == t ? 1 : 2);
        if (needed > static_cast<std::size_t>(params.n_max) + 1) continue;
      }
      auto link = set.find(u, v);
      if (!link) continue;
      if (prune && set.link(*link).length_km > params.l_max_km) continue;
      current.links.push_back(*link);
      current.nodes.push_back(v);
      if (v == t) {
        if (++total > cap) {
          throw LimitError("path catalog exceeds the cap of " + std::to_string(cap) +
                           " paths (reached at pair " + set.pair_label(q) + ")");
        }
        out.push_back(current);
      } else {
        visited[v] = 1;
        dfs(v);
        visited[v] = 0;
      }
      current.links.pop_back();
      current.nodes.pop_back();
    }
  }
};

}  // namespace

PathCatalog enumerate_paths(const CandidateLinkSet& links,
                            const ResolvedRequirements& req,
                            const PathEnumerationOptions& options) {
  if (req.pairs.size() != links.pair_count()) {
    throw InputError("requirements do not match the pair set");
  }
  PathCatalog cat;
  cat.per_pair.resize(links.pair_count());
  std::size_t total = 0;
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const EndNodePair pair = links.pairs()[q];
    std::vector<NodeIndex> heads = links.repeater_locations();
    heads.push_back(pair.t);
    std::sort(heads.begin(), heads.end());
    Enumerator e{links,   req.pairs[q], options.prune, options.cap,
                 total,   q,            pair.t,        std::move(heads),
                 std::vector<char>(links.node_count(), 0), Path{}, cat.per_pair[q]};
    e.current.pair = q;
    e.current.nodes.push_back(pair.s);
    e.visited[pair.s] = 1;
    e.dfs(pair.s);
  }
  return cat;
}

const char* formulation_name(FormulationKind kind) {
  switch (kind) {
    case FormulationKind::PathBased: return "path";
    case FormulationKind::LinkBased: return "link";
    case FormulationKind::Generalized: return "generalized";
  }
  return "?";
}

FormulationKind parse_formulation(std::string_view name) {
  if (name == "path") return FormulationKind::PathBased;
  if (name == "link") return FormulationKind::LinkBased;
  if (name == "generalized") return FormulationKind::Generalized;
  throw InputError("unknown formulation '" + std::string(name) +
                   "' (expected path, link or generalized)");
}

std::optional<VarIndex> FormulationArtifacts::y_var(NodeIndex u) const {
  if (u >= y_of_node.size() || y_of_node[u] < 0) return std::nullopt;
  return static_cast<VarIndex>(y_of_node[u]);
}

std::optional<LinkVarKey> FormulationArtifacts::link_key(VarIndex v) const {
  if (v < first_link_var || v - first_link_var >= link_keys.size()) return std::nullopt;
  return link_keys[v - first_link_var];
}

double length_upper_bound(const ResolvedRequirements& req) {
  double total = 0.0;
  for (const auto& p : req.pairs) {
    total += static_cast<double>(p.k) * (p.n_max + 1) * p.l_max_km;
  }
  return total;
}

double default_alpha(const ResolvedRequirements& req) {
  return 1.0 / (1.0 + length_upper_bound(req));
}

std::size_t path_count_complete(std::size_t r) {
  // sum_{i=0}^{r} r! / (r - i)!
  std::size_t total = 0;
  std::size_t term = 1;
  for (std::size_t i = 0; i <= r; ++i) {
    total += term;
    term *= (r - i);
  }
  return total;
}

std::size_t path_based_var_count(std::size_t r, std::size_t c) {
  return r + c * (c - 1) / 2 * path_count_complete(r);
}

std::size_t link_based_var_count(std::size_t r, std::size_t c, std::size_t k) {
  return r + k * (c * (c - 1) / 2) * (r * r + r + 1);
}

namespace {

void declare_repeaters(FormulationArtifacts& art, const CandidateLinkSet& links) {
  art.repeater_nodes = links.repeater_locations();
  art.y_of_node.assign(links.node_count(), -1);
  for (NodeIndex u : art.repeater_nodes) {
    VarIndex v = art.model.add_binary("y[" + links.id(u) + "]", 1.0);
    art.y_vars.push_back(v);
    art.y_of_node[u] = v;
  }
}

void check_params(const CandidateLinkSet& links, const ResolvedRequirements& req) {
  if (req.pairs.size() != links.pair_count() ||
      req.node_d.size() != links.node_count()) {
    throw InputError("requirements do not match the candidate link set");
  }
}

void require_homogeneous(const ResolvedRequirements& req, const char* what) {
  if (!req.homogeneous()) {
    throw InputError(std::string(what) +
                     " needs homogeneous requirements; use the generalized formulation");
  }
}

FormulationArtifacts build_link_model(const CandidateLinkSet& links,
                                      const ResolvedRequirements& req,
                                      const FormulationOptions& options,
                                      FormulationKind kind, double alpha) {
  FormulationArtifacts art;
  art.kind = kind;
  art.params = req;
  art.alpha = alpha;
  const std::size_t n = links.node_count();

  std::size_t nvars = links.repeater_locations().size();
  std::size_t nrows = links.repeater_locations().size();
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const auto k = static_cast<std::size_t>(req.pairs[q].k);
    nvars += k * links.pair_links(q).size();
    nrows += k * (links.repeater_locations().size() + 3) + 1 +
             links.repeater_locations().size();
  }
  art.model.reserve(nvars, nrows);
  declare_repeaters(art, links);

  art.first_link_var = static_cast<VarIndex>(art.model.var_count());
  art.link_block.resize(links.pair_count());
  art.link_keys.reserve(nvars - art.y_vars.size());
  std::string name;
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const PairParams& p = req.pairs[q];
    auto eq = links.pair_links(q);
    for (int k = 1; k <= p.k; ++k) {
      art.link_block[q].push_back(static_cast<VarIndex>(art.model.var_count()));
      const std::string prefix =
          "x[q=" + std::to_string(q) + ",k=" + std::to_string(k) + ",";
      for (std::size_t pos = 0; pos < eq.size(); ++pos) {
        const CandidateLink& l = links.link(eq[pos]);
        name = prefix;
        name += links.id(l.u);
        name += ',';
        name += links.id(l.v);
        name += ']';
        VarIndex v = art.model.add_binary(name, alpha * l.length_km);
        art.link_keys.push_back({q, k, pos});
        if (!options.strict_rows && l.length_km > p.l_max_km) art.model.fix_zero(v);
      }
    }
  }

  std::vector<std::int64_t> row_of(n, -1);
  std::vector<std::vector<Term>> node_terms;
  std::vector<std::vector<Term>> capacity(n);

  // Flow conservation, then the literal length rows in strict mode.
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const PairParams& p = req.pairs[q];
    const NodeIndex s = links.pairs()[q].s;
    const NodeIndex t = links.pairs()[q].t;
    std::vector<NodeIndex> flow_nodes = links.repeater_locations();
    flow_nodes.push_back(s);
    flow_nodes.push_back(t);
    std::sort(flow_nodes.begin(), flow_nodes.end());
    for (std::size_t i = 0; i < flow_nodes.size(); ++i) row_of[flow_nodes[i]] = static_cast<std::int64_t>(i);
    auto eq = links.pair_links(q);
    for (int k = 1; k <= p.k; ++k) {
      node_terms.assign(flow_nodes.size(), {});
      for (std::size_t pos = 0; pos < eq.size(); ++pos) {
        const CandidateLink& l = links.link(eq[pos]);
        VarIndex v = art.link_var(q, k, pos);
        node_terms[static_cast<std::size_t>(row_of[l.u])].push_back({v, 1.0});
        node_terms[static_cast<std::size_t>(row_of[l.v])].push_back({v, -1.0});
      }
      for (std::size_t i = 0; i < flow_nodes.size(); ++i) {
        const NodeIndex u = flow_nodes[i];
        double rhs = u == s ? 1.0 : (u == t ? -1.0 : 0.0);
        art.model.add_constraint("lbf_flowcon[q=" + std::to_string(q) + ",k=" +
                                     std::to_string(k) + ",u=" + links.id(u) + "]",
                                 std::move(node_terms[i]), Sense::EQ, rhs);
      }
      if (options.strict_rows) {
        for (std::size_t pos = 0; pos < eq.size(); ++pos) {
          const CandidateLink& l = links.link(eq[pos]);
          art.model.add_constraint(
              "lbf_length[q=" + std::to_string(q) + ",k=" + std::to_string(k) +
                  ",u=" + links.id(l.u) + ",v=" + links.id(l.v) + "]",
              {{art.link_var(q, k, pos), l.length_km}}, Sense::LE, p.l_max_km);
        }
      }
    }
    for (NodeIndex u : flow_nodes) row_of[u] = -1;
  }

  // Hop bound per (q, k).
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const PairParams& p = req.pairs[q];
    const std::size_t m = links.pair_links(q).size();
    for (int k = 1; k <= p.k; ++k) {
      std::vector<Term> terms;
      terms.reserve(m);
      for (std::size_t pos = 0; pos < m; ++pos) terms.push_back({art.link_var(q, k, pos), 1.0});
      art.model.add_constraint(
          "lbf_hops[q=" + std::to_string(q) + ",k=" + std::to_string(k) + "]",
          std::move(terms), Sense::LE, p.n_max + 1.0);
    }
  }

  // Node disjointness per (q, u), single direct link per q, and collect the
  // capacity terms on the way.
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const PairParams& p = req.pairs[q];
    const NodeIndex s = links.pairs()[q].s;
    const NodeIndex t = links.pairs()[q].t;
    auto eq = links.pair_links(q);
    std::vector<std::vector<Term>> out_terms(n);
    std::vector<Term> direct;
    for (int k = 1; k <= p.k; ++k) {
      for (std::size_t pos = 0; pos < eq.size(); ++pos) {
        const CandidateLink& l = links.link(eq[pos]);
        VarIndex v = art.link_var(q, k, pos);
        if (l.u == s && l.v == t) direct.push_back({v, 1.0});
        if (l.u != s) {
          out_terms[l.u].push_back({v, 1.0});
          capacity[l.u].push_back({v, 1.0});
        }
      }
    }
    for (NodeIndex u : links.repeater_locations()) {
      if (out_terms[u].empty()) continue;
      art.model.add_constraint(
          "lbf_disjoint[q=" + std::to_string(q) + ",u=" + links.id(u) + "]",
          std::move(out_terms[u]), Sense::LE, 1.0);
    }
    if (!direct.empty()) {
      art.model.add_constraint("lbf_direct[q=" + std::to_string(q) + "]",
                               std::move(direct), Sense::LE, 1.0);
    }
  }

  for (std::size_t i = 0; i < art.repeater_nodes.size(); ++i) {
    const NodeIndex u = art.repeater_nodes[i];
    std::vector<Term> terms;
    terms.reserve(capacity[u].size() + 1);
    terms.push_back({art.y_vars[i], -static_cast<double>(req.node_d[u])});
    terms.insert(terms.end(), capacity[u].begin(), capacity[u].end());
    art.model.add_constraint("lbf_capacity[u=" + links.id(u) + "]", std::move(terms),
                             Sense::LE, 0.0);
  }
  return art;
}

}  // namespace

FormulationArtifacts build_path_based(const CandidateLinkSet& links,
                                      PathCatalog catalog,
                                      const ResolvedRequirements& req,
                                      const FormulationOptions& options) {
  check_params(links, req);
  require_homogeneous(req, "the path-based formulation");
  if (catalog.per_pair.size() != links.pair_count()) {
    throw InputError("path catalog does not match the pair set");
  }
  FormulationArtifacts art;
  art.kind = FormulationKind::PathBased;
  art.params = req;
  declare_repeaters(art, links);

  std::vector<std::string> empty_pairs;
  art.path_vars.resize(links.pair_count());
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    const PairParams& p = req.pairs[q];
    std::size_t admissible = 0;
    for (std::size_t i = 0; i < catalog.per_pair[q].size(); ++i) {
      const Path& path = catalog.per_pair[q][i];
      VarIndex v = art.model.add_binary(
          "xp[q=" + std::to_string(q) + ",p=" + std::to_string(i) + "]", 0.0);
      art.path_vars[q].push_back(v);
      bool ok = path.admissible(links, p);
      if (ok) ++admissible;
      if (!ok && !options.strict_rows) art.model.fix_zero(v);
    }
    if (admissible == 0) empty_pairs.push_back(links.pair_label(q));
  }
  if (!empty_pairs.empty()) {
    throw InfeasibleError("paths", "no admissible path for pair", std::move(empty_pairs));
  }

  if (options.strict_rows) {
    for (std::size_t q = 0; q < links.pair_count(); ++q) {
      const PairParams& p = req.pairs[q];
      for (std::size_t i = 0; i < catalog.per_pair[q].size(); ++i) {
        const Path& path = catalog.per_pair[q][i];
        VarIndex v = art.path_vars[q][i];
        const std::string tag = "[q=" + std::to_string(q) + ",p=" + std::to_string(i);
        for (LinkIndex l : path.links) {
          const CandidateLink& link = links.link(l);
          art.model.add_constraint("pbf_length" + tag + ",u=" + links.id(link.u) +
                                       ",v=" + links.id(link.v) + "]",
                                   {{v, link.length_km}}, Sense::LE, p.l_max_km);
        }
        art.model.add_constraint("pbf_hops" + tag + "]",
                                 {{v, static_cast<double>(path.hop_count())}},
                                 Sense::LE, p.n_max + 1.0);
      }
    }
  }

  const std::size_t n = links.node_count();
  std::vector<std::vector<Term>> capacity(n);
  for (std::size_t q = 0; q < links.pair_count(); ++q) {
    std::vector<Term> k_row;
    std::vector<std::vector<Term>> uses(n);
    for (std::size_t i = 0; i < catalog.per_pair[q].size(); ++i) {
      VarIndex v = art.path_vars[q][i];
      k_row.push_back({v, 1.0});
      for (NodeIndex u : catalog.per_pair[q][i].repeaters()) {
        uses[u].push_back({v, 1.0});
        capacity[u].push_back({v, 1.0});
      }
    }
    art.model.add_constraint("pbf_k[q=" + std::to_string(q) + "]", std::move(k_row),
                             Sense::EQ, static_cast<double>(req.pairs[q].k));
    for (NodeIndex u : links.repeater_locations()) {
      if (uses[u].empty()) continue;
      art.model.add_constraint(
          "pbf_disjoint[q=" + std::to_string(q) + ",u=" + links.id(u) + "]",
          std::move(uses[u]), Sense::LE, 1.0);
    }
  }
  for (std::size_t i = 0; i < art.repeater_nodes.size(); ++i) {
    const NodeIndex u = art.repeater_nodes[i];
    std::vector<Term> terms;
    terms.reserve(capacity[u].size() + 1);
    terms.push_back({art.y_vars[i], -static_cast<double>(req.node_d[u])});
    terms.insert(terms.end(), capacity[u].begin(), capacity[u].end());
    art.model.add_constraint("pbf_capacity[u=" + links.id(u) + "]", std::move(terms),
                             Sense::LE, 0.0);
  }
  art.catalog = std::move(catalog);
  return art;
}

FormulationArtifacts build_link_based(const CandidateLinkSet& links,
                                      const ResolvedRequirements& req,
                                      const FormulationOptions& options) {
  check_params(links, req);
  require_homogeneous(req, "the link-based formulation");
  return build_link_model(links, req, options, FormulationKind::LinkBased, 0.0);
}

FormulationArtifacts build_generalized(const CandidateLinkSet& links,
                                       const ResolvedRequirements& req,
                                       const FormulationOptions& options) {
  check_params(links, req);
  for (const auto& p : req.pairs) {
    if (p.k < 1 || p.n_max < 0 || !(p.l_max_km > 0.0)) {
      throw InputError("per-pair parameters must have k >= 1, n_max >= 0, l_max > 0");
    }
  }
  double alpha = default_alpha(req);
  if (options.alpha) {
    alpha = *options.alpha;
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw InputError("alpha must be a nonnegative finite number");
    }
    if (alpha * length_upper_bound(req) >= 1.0) {
      throw InputError("alpha too large: alpha times the length bound " +
                       std::to_string(length_upper_bound(req)) +
                       " must stay below 1");
    }
  }
  return build_link_model(links, req, options, FormulationKind::Generalized, alpha);
}

}  // namespace rplan
