#pragma once

// Random geometric graphs on the unit square with convex-hull end nodes.

#include <cstdint>
#include <string>
#include <vector>

#include "rplan/error.hpp"
#include "rplan/network.hpp"
#include "rplan/planner.hpp"

namespace rplan {

// Points and radius edges before end nodes are chosen.
struct GeometricGraph {
  std::vector<std::string> ids;  // "n00", "n01", ...
  std::vector<Point> points;
  std::vector<FiberSpec> edges;  // i < j by index, ascending (i, j)
};

// n points drawn as (x, y) pairs of uniform01() from Rng(seed); edge when the
// Euclidean distance is at most `radius`, weighted by that distance.
GeometricGraph random_geometric(int n, double radius, std::uint64_t seed);

// Indices of the strict vertices of the convex hull in hull order, starting
// at the lowest-then-leftmost point. Points on a hull edge are not vertices.
std::vector<std::size_t> convex_hull_vertices(const std::vector<Point>& points);

// Raised when the hull degenerates (all points collinear); resample.
class DegenerateHullError : public InputError {
 public:
  using InputError::InputError;
};

// Hull vertices become end nodes, all other points repeater locations.
FiberNetwork assign_end_nodes(const GeometricGraph& graph);

struct GeneratedNetwork {
  FiberNetwork network;
  int attempts = 0;             // 1-based attempt that succeeded
  std::uint64_t instance_seed;  // seed passed to random_geometric
};

// Seed of attempt a (0-based): derive_seed(seed, a).
std::uint64_t attempt_seed(std::uint64_t seed, int attempt);

// Draws graphs until plan() succeeds on one. Throws InfeasibleError with
// stage "generate" after max_attempts failures.
GeneratedNetwork generate_feasible(int n, double radius, std::uint64_t seed,
                                   const RequirementConfig& requirements,
                                   const PlanOptions& options, int max_attempts);

// Draw without the feasibility filter; still resamples degenerate hulls.
GeneratedNetwork generate_network(int n, double radius, std::uint64_t seed,
                                  int max_attempts = 100);

}  // namespace rplan
