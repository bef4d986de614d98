#pragma once

// The path-based, link-based and generalized link-based ILP formulations of
// the repeater-allocation problem, built from a candidate link set.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rplan/ilp.hpp"
#include "rplan/network.hpp"
#include "rplan/requirements.hpp"

namespace rplan {

// A loop-free s -> t sequence of elementary links of one pair.
struct Path {
  std::size_t pair = 0;
  std::vector<LinkIndex> links;
  std::vector<NodeIndex> nodes;  // s, repeaters..., t

  std::size_t hop_count() const { return links.size(); }
  std::span<const NodeIndex> repeaters() const {
    return nodes.size() < 2 ? std::span<const NodeIndex>()
                            : std::span<const NodeIndex>(nodes).subspan(1, nodes.size() - 2);
  }
  double max_link_km(const CandidateLinkSet& links) const;
  double length_km(const CandidateLinkSet& links) const;
  bool admissible(const CandidateLinkSet& links, const PairParams& p) const;
};

struct PathCatalog {
  std::vector<std::vector<Path>> per_pair;

  std::size_t total() const;
};

struct PathEnumerationOptions {
  bool prune = true;
  std::size_t cap = 1'000'000;
};

// DFS from s, trying successors in ascending node id. Throws LimitError when
// the catalog would exceed the cap.
PathCatalog enumerate_paths(const CandidateLinkSet& links,
                            const ResolvedRequirements& req,
                            const PathEnumerationOptions& options = {});

enum class FormulationKind { PathBased, LinkBased, Generalized };

const char* formulation_name(FormulationKind kind);  // "path", "link", "generalized"
FormulationKind parse_formulation(std::string_view name);

struct FormulationOptions {
  // Emit length and hop limits as literal rows instead of variable fixing.
  bool strict_rows = false;
  // Generalized only; unset selects 1 / (1 + length upper bound).
  std::optional<double> alpha;
};

// Identity of a link variable x^{q,k}_{uv}; k is 1-based.
struct LinkVarKey {
  std::size_t pair;
  int k;
  std::size_t position;  // index into pair_links(pair)
};

struct FormulationArtifacts {
  FormulationKind kind = FormulationKind::LinkBased;
  IlpModel model;
  ResolvedRequirements params;
  std::vector<NodeIndex> repeater_nodes;  // R, ascending
  std::vector<VarIndex> y_vars;           // parallel to repeater_nodes
  std::vector<std::int64_t> y_of_node;    // NodeIndex -> VarIndex or -1

  // Path-based: x_p per pair, parallel to the catalog.
  PathCatalog catalog;
  std::vector<std::vector<VarIndex>> path_vars;

  // Link-based: first variable of block (q, k); the block holds one variable
  // per entry of pair_links(q), in that order.
  std::vector<std::vector<VarIndex>> link_block;
  std::vector<LinkVarKey> link_keys;  // indexed by VarIndex - first_link_var
  VarIndex first_link_var = 0;

  double alpha = 0.0;

  std::optional<VarIndex> y_var(NodeIndex u) const;
  VarIndex link_var(std::size_t q, int k, std::size_t position) const {
    return link_block[q][static_cast<std::size_t>(k - 1)] +
           static_cast<VarIndex>(position);
  }
  std::optional<LinkVarKey> link_key(VarIndex v) const;
};

FormulationArtifacts build_path_based(const CandidateLinkSet& links,
                                      PathCatalog catalog,
                                      const ResolvedRequirements& req,
                                      const FormulationOptions& options = {});
FormulationArtifacts build_link_based(const CandidateLinkSet& links,
                                      const ResolvedRequirements& req,
                                      const FormulationOptions& options = {});
FormulationArtifacts build_generalized(const CandidateLinkSet& links,
                                       const ResolvedRequirements& req,
                                       const FormulationOptions& options = {});

// Upper bound on the total selected link length: sum_q K^q (N^q + 1) L^q.
double length_upper_bound(const ResolvedRequirements& req);
double default_alpha(const ResolvedRequirements& req);

// Closed-form variable counts on complete candidate sets.
std::size_t path_count_complete(std::size_t r);  // per pair
std::size_t path_based_var_count(std::size_t r, std::size_t c);
std::size_t link_based_var_count(std::size_t r, std::size_t c, std::size_t k);

}  // namespace rplan
