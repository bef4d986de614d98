#include "rplan/randomnet.hpp"

#include <algorithm>
#include <cmath>

#include "rplan/rng.hpp"

namespace rplan {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::string node_id(int i, int n) {
  int width = 2;
  for (int m = n - 1; m >= 100; m /= 10) ++width;
  std::string digits = std::to_string(i);
  if (digits.size() < static_cast<std::size_t>(width)) digits.insert(0, width - digits.size(), '0');
  return "n" + digits;
}

}  // namespace

GeometricGraph random_geometric(int n, double radius, std::uint64_t seed) {
  if (n < 3) throw InputError("random graph needs at least 3 nodes");
  if (!(radius > 0.0 && radius <= std::sqrt(2.0))) {
    throw InputError("radius must lie in (0, sqrt(2)]");
  }
  GeometricGraph g;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    const double y = rng.uniform01();
    g.points.push_back({x, y});
    g.ids.push_back(node_id(i, n));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = std::hypot(g.points[i].x - g.points[j].x, g.points[i].y - g.points[j].y);
      if (r <= radius && r > 0.0) g.edges.push_back({g.ids[i], g.ids[j], r});
    }
  }
  return g;
}

std::vector<std::size_t> convex_hull_vertices(const std::vector<Point>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].y != points[b].y) return points[a].y < points[b].y;
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return points[a].x == points[b].x && points[a].y == points[b].y;
                          }),
              order.end());
  if (order.size() < 3) return order;

  // Monotone chain keyed on (y, x); popping on cross <= 0 drops points that
  // lie on a hull edge.
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t idx = order.size() - 1, lower = k + 1; idx-- > 0;) {
    const std::size_t i = order[idx];
    while (k >= lower && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

FiberNetwork assign_end_nodes(const GeometricGraph& graph) {
  const std::vector<std::size_t> hull = convex_hull_vertices(graph.points);
  if (hull.size() < 3) throw DegenerateHullError("points are collinear; hull is degenerate");
  std::vector<bool> on_hull(graph.points.size(), false);
  for (std::size_t i : hull) on_hull[i] = true;
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < graph.points.size(); ++i) {
    nodes.push_back({graph.ids[i], on_hull[i] ? NodeRole::End : NodeRole::Repeater,
                     graph.points[i]});
  }
  return FiberNetwork(std::move(nodes), graph.edges);
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
  return derive_seed(seed, static_cast<std::uint64_t>(attempt));
}

GeneratedNetwork generate_network(int n, double radius, std::uint64_t seed, int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    const std::uint64_t s = attempt_seed(seed, a);
    try {
      return GeneratedNetwork{assign_end_nodes(random_geometric(n, radius, s)), a + 1, s};
    } catch (const DegenerateHullError&) {
    }
  }
  throw InfeasibleError("generate", "every draw had a degenerate hull",
                        {std::to_string(max_attempts) + " attempts"});
}

GeneratedNetwork generate_feasible(int n, double radius, std::uint64_t seed,
                                   const RequirementConfig& requirements,
                                   const PlanOptions& options, int max_attempts) {
  if (max_attempts < 1) throw InputError("max_attempts must be positive");
  std::string last;
  for (int a = 0; a < max_attempts; ++a) {
    const std::uint64_t s = attempt_seed(seed, a);
    try {
      FiberNetwork net = assign_end_nodes(random_geometric(n, radius, s));
      plan(net, requirements, options);
      return GeneratedNetwork{std::move(net), a + 1, s};
    } catch (const DegenerateHullError& e) {
      last = e.what();
    } catch (const InfeasibleError& e) {
      last = e.what();
    } catch (const LimitError& e) {
      last = e.what();
    }
  }
  throw InfeasibleError("generate", "no feasible instance within the attempt budget",
                        {std::to_string(max_attempts) + " attempts", "last failure: " + last});
}

}  // namespace rplan
