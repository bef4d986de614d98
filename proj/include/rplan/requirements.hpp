#pragma once

// Toy repeater-chain model (Werner-state swapping over massively multiplexed
// elementary links) and the (N_max, L_max) bounds derived from it.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rplan/network.hpp"

namespace rplan {

struct HardwareConstants {
  double f_link = 0.99;
  int m = 1000;                  // multiplexing attempts per round
  double c_fiber_km_s = 200000;  // signal speed in fiber
  double l_att_km = 22;          // attenuation length

  void validate() const;
};

struct ChainRequirements {
  double r_min_hz = 1.0;
  double f_min = 0.93;
  int k = 1;
  int d = 1;
  HardwareConstants hardware;

  void validate() const;
};

struct DerivedBounds {
  int n_max = 0;
  double l_max_km = 0;             // the value the formulations use
  double l_max_continuous_km = 0;  // bisection value, before flooring
};

struct BoundsOptions {
  int n_max_ceiling = 64;
  // Use the continuous bisection value for l_max_km instead of whole km.
  bool continuous = false;
  double bisection_tol_km = 1e-6;
};

// F = (1 + 3 p^(N+1)) / 4 with p = (4 F_link - 1) / 3.
double chain_fidelity(int n, double f_link);

// R = (c / L) (1/2)^N [1 - (1 - e^(-L/L_att) / 2)^M]^(N+1).
double chain_rate(int n, double length_km, const HardwareConstants& hw);

// Largest N with chain_fidelity(N) > f_min (strict), capped at the ceiling.
// Throws InfeasibleError (stage "bounds") when even N = 0 fails.
int derive_n_max(double f_min, double f_link, int ceiling = 64);

// Largest L with chain_rate(n, L) > r_min. Throws InfeasibleError when the
// rate target fails already at the 0.1 km floor, or when the whole-km value
// would be 0 and continuous reporting is off.
DerivedBounds derive_l_max(int n, double r_min_hz, const HardwareConstants& hw,
                           const BoundsOptions& options = {});

DerivedBounds derive_bounds(const ChainRequirements& req,
                            const BoundsOptions& options = {});

// Per-pair overrides, keyed by the unordered end-node pair.
struct PairOverride {
  std::optional<double> r_min_hz;
  std::optional<double> f_min;
  std::optional<int> k;
  std::optional<int> n_max;
  std::optional<double> l_max_km;
};

// Parsed requirement document: base chain requirements, optional direct
// bounds that bypass the toy model, and heterogeneous overrides.
struct RequirementConfig {
  ChainRequirements base;
  std::optional<int> n_max;
  std::optional<double> l_max_km;
  std::map<std::pair<std::string, std::string>, PairOverride> per_pair;
  std::map<std::string, int> per_node_d;

  bool heterogeneous() const { return !per_pair.empty() || !per_node_d.empty(); }
};

RequirementConfig load_requirements(std::string_view json_text);
RequirementConfig load_requirements_file(const std::string& path);
std::string requirements_to_json(const RequirementConfig& config);

// Bounds for the base requirements after applying direct overrides.
DerivedBounds resolve_base_bounds(const RequirementConfig& config,
                                  const BoundsOptions& options = {});

struct PairParams {
  int k = 1;
  int n_max = 0;
  double l_max_km = 0;
};

// Requirements resolved against a concrete network and pair set: one entry
// per q in Q, and a D value per node (0 for end nodes).
struct ResolvedRequirements {
  std::vector<PairParams> pairs;
  std::vector<int> node_d;
  DerivedBounds base_bounds;
  int base_k = 1;
  int base_d = 1;

  bool homogeneous() const;
};

ResolvedRequirements resolve_requirements(const RequirementConfig& config,
                                          const FiberNetwork& net,
                                          const EndNodePairSet& pairs,
                                          const BoundsOptions& options = {});

// Uniform parameters for the path- and link-based formulations.
ResolvedRequirements uniform_requirements(const FiberNetwork& net,
                                          const EndNodePairSet& pairs, int k,
                                          int d, int n_max, double l_max_km);

}  // namespace rplan
