#pragma once

// End-to-end repeater placement: bounds, candidate links, formulation,
// solving, path extraction, loop removal and the plan audit.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rplan/formulations.hpp"
#include "rplan/network.hpp"
#include "rplan/requirements.hpp"
#include "rplan/solver.hpp"

namespace rplan {

// One extracted path of pair q, robustness copy k (1-based).
struct ExtractedPath {
  std::size_t pair = 0;
  int k = 1;
  std::vector<LinkIndex> links;  // into the candidate link set
  std::vector<NodeIndex> nodes;  // s, ..., t
};

// Follows the unique outgoing selected link of every (q, k) block from s to
// t. Throws std::logic_error("corrupt assignment: ...") when a node has no or
// several outgoing links, or the walk revisits a node.
std::vector<ExtractedPath> extract_paths(const FormulationArtifacts& f,
                                         const CandidateLinkSet& links,
                                         const Assignment& a);

// Zeroes every link variable that is not on the extracted path of its block.
Assignment remove_loops(const FormulationArtifacts& f, const CandidateLinkSet& links,
                        const Assignment& a, const std::vector<ExtractedPath>& paths);

// Chosen x_p of a path-based solution, numbered k = 1.. in catalog order.
std::vector<ExtractedPath> chosen_paths(const FormulationArtifacts& f, const Assignment& a);

// Counterpart assignments between the two formulations built on the same
// candidate links and requirements.
Assignment link_to_path_assignment(const FormulationArtifacts& link_model,
                                   const CandidateLinkSet& links,
                                   const Assignment& link_solution,
                                   const FormulationArtifacts& path_model);
Assignment path_to_link_assignment(const FormulationArtifacts& path_model,
                                   const Assignment& path_solution,
                                   const FormulationArtifacts& link_model,
                                   const CandidateLinkSet& links);

struct PlanLink {
  NodeIndex u;
  NodeIndex v;
  double length_km;
  std::vector<NodeIndex> hops;  // fiber route u, ..., v
};

struct PlanPath {
  std::size_t pair = 0;
  int k = 1;
  std::vector<std::size_t> links;  // into DeploymentPlan::links
  std::vector<NodeIndex> nodes;
};

struct PlanPair {
  NodeIndex s;
  NodeIndex t;
  PairParams params;
};

struct PlanMetrics {
  std::size_t repeater_count = 0;
  int connectivity = 0;
};

struct PlanProvenance {
  std::uint64_t seed = 0;
  FormulationKind formulation = FormulationKind::LinkBased;
  DerivedBounds base_bounds;
  double alpha = 0.0;
  double objective = 0.0;
  std::int64_t solver_nodes = 0;
  double solve_ms = 0.0;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

struct DeploymentPlan {
  std::vector<std::string> node_ids;  // NodeIndex -> id of the planned network
  std::vector<NodeIndex> repeaters;   // ascending
  std::vector<PlanLink> links;        // sorted by (u, v)
  std::vector<PlanPath> paths;        // by (pair, k)
  std::vector<PlanPair> pairs;
  std::vector<int> node_d;            // capacity per node, 0 for end nodes
  PlanMetrics metrics;
  PlanProvenance provenance;
};

struct PlanOptions {
  FormulationKind formulation = FormulationKind::LinkBased;
  std::uint64_t seed = 0;         // orientation of the end-node pairs
  bool canonical_pairs = false;   // s before t in id order instead of seeded
  std::optional<int> n_max;       // bypass the toy-model bounds
  std::optional<double> l_max_km;
  FormulationOptions formulation_options;
  CandidateLinkOptions link_options;
  PathEnumerationOptions path_options;
  SolveOptions solve;
  // Branch on repeater variables before link variables.
  bool branch_repeaters_first = true;
  // On an infeasible ILP, re-solve with unlimited capacity to tell a
  // capacity shortfall from missing disjoint paths.
  bool diagnose = true;
  // Solve through an external command instead of the built-in solver.
  std::optional<ExternalSolverConfig> external;
};

// The inputs and model plan() would solve, without feasibility screening.
struct PlanModel {
  EndNodePairSet pairs;
  ResolvedRequirements requirements;
  CandidateLinkSet links;
  FormulationArtifacts formulation;
};

PlanModel build_plan_model(const FiberNetwork& net, const RequirementConfig& requirements,
                           const PlanOptions& options = {});

// Throws InfeasibleError with stage "bounds", "candidate-links", "paths" or
// "ilp", and LimitError (message prefixed "solver-limit") when the solver
// stops before proving optimality. The audit runs on every plan; a failure
// throws std::logic_error.
DeploymentPlan plan(const FiberNetwork& net, const RequirementConfig& requirements,
                    const PlanOptions& options = {});

// Every plan invariant checked against the network; empty when the plan is
// sound.
std::vector<std::string> audit_plan(const FiberNetwork& net, const DeploymentPlan& plan);

// For every single repeater or plan link removed, pairs keep at least K-1
// intact paths. Returns the violations.
std::vector<std::string> robustness_check(const DeploymentPlan& plan);

std::string plan_to_json(const DeploymentPlan& plan);
// Node indices are resolved against `net`; throws InputError on schema or
// name errors.
DeploymentPlan plan_from_json(const FiberNetwork& net, std::string_view text);

}  // namespace rplan
