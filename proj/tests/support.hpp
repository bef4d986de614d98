#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance runner. Nothing here calls into the code it is used to check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rplan/ilp.hpp"
#include "rplan/network.hpp"

namespace rplan::testing {

inline std::string data_path(const std::string& name) {
  return std::string(RPLAN_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string pad_id(const char* prefix, int i) {
  return std::string(prefix) + (i < 10 ? "0" : "") + std::to_string(i);
}

// Complete graph with unit fibers: every candidate link is the direct fiber.
inline FiberNetwork complete_network(int repeaters, int ends) {
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < ends; ++i) nodes.push_back({pad_id("c", i), NodeRole::End, std::nullopt});
  for (int i = 0; i < repeaters; ++i) nodes.push_back({pad_id("r", i), NodeRole::Repeater, std::nullopt});
  std::vector<FiberSpec> fibers;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) fibers.push_back({nodes[a].id, nodes[b].id, 1.0});
  }
  return FiberNetwork(std::move(nodes), std::move(fibers));
}

struct SmallInstance {
  FiberNetwork network;
  int k;
  int d;
  int n_max;
  double l_max_km;
};

// Connected random network on n nodes with `ends` end nodes and integer fiber
// lengths, plus random uniform requirements.
inline SmallInstance random_small_instance(std::mt19937_64& g, int n, int ends) {
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({pad_id(i < ends ? "e" : "r", i), i < ends ? NodeRole::End : NodeRole::Repeater,
                     std::nullopt});
  }
  std::uniform_int_distribution<int> len(1, 9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<FiberSpec> fibers;
  for (int i = 1; i < n; ++i) {
    const int j = std::uniform_int_distribution<int>(0, i - 1)(g);
    fibers.push_back({nodes[i].id, nodes[j].id, static_cast<double>(len(g))});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u01(g) < 0.45) fibers.push_back({nodes[i].id, nodes[j].id, static_cast<double>(len(g))});
    }
  }
  const int k = std::uniform_int_distribution<int>(1, 2)(g);
  const int d = std::uniform_int_distribution<int>(1, 3)(g);
  const int n_max = std::uniform_int_distribution<int>(0, 3)(g);
  const double l_max = static_cast<double>(std::uniform_int_distribution<int>(4, 14)(g));
  return {FiberNetwork(std::move(nodes), std::move(fibers)), k, d, n_max, l_max};
}

// Random binary ILP with small integer data.
inline IlpModel random_ilp(std::mt19937_64& g, int vars) {
  IlpModel m;
  std::uniform_int_distribution<int> coef(-4, 6);
  for (int j = 0; j < vars; ++j) m.add_binary("x" + std::to_string(j), coef(g));
  const int rows = std::uniform_int_distribution<int>(1, vars + 2)(g);
  std::uniform_int_distribution<int> pick(0, vars - 1);
  std::uniform_int_distribution<int> a(-3, 4);
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    const int width = std::uniform_int_distribution<int>(1, std::min(vars, 6))(g);
    for (int t = 0; t < width; ++t) terms.push_back({static_cast<VarIndex>(pick(g)), static_cast<double>(a(g))});
    const int s = std::uniform_int_distribution<int>(0, 5)(g);
    const Sense sense = s < 3 ? Sense::LE : s < 5 ? Sense::GE : Sense::EQ;
    const double rhs = std::uniform_int_distribution<int>(-2, 5)(g);
    m.add_constraint("", std::move(terms), sense, rhs);
  }
  if (std::uniform_int_distribution<int>(0, 4)(g) == 0) m.fix_zero(static_cast<VarIndex>(pick(g)));
  return m;
}

// Exhaustive ILP optimum: returns +inf when infeasible.
inline double exhaustive_optimum(const IlpModel& m) {
  const std::size_t n = m.var_count();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (((code >> j) & 1) && m.variable(static_cast<VarIndex>(j)).fixed_zero) ok = false;
    }
    for (const Constraint& c : m.constraints()) {
      if (!ok) break;
      double act = 0.0;
      for (const Term& t : c.terms) act += ((code >> t.var) & 1) ? t.coef : 0.0;
      if (c.sense == Sense::LE) ok = act <= c.rhs + 1e-9;
      if (c.sense == Sense::GE) ok = act >= c.rhs - 1e-9;
      if (c.sense == Sense::EQ) ok = std::abs(act - c.rhs) <= 1e-9;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += ((code >> j) & 1) ? m.objective()[j] : 0.0;
    best = std::min(best, obj);
  }
  return best;
}

// Vertex connectivity by trying every vertex subset as a separator.
inline int connectivity_by_cuts(int n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (n < 2) return 0;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [a, b] : edges) {
    if (a != b) adj[a][b] = adj[b][a] = true;
  }
  bool complete = true;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) complete = complete && adj[a][b];
  }
  if (complete) return n - 1;
  int best = n - 1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int removed = std::popcount(mask);
    if (removed >= best || removed > n - 2) continue;
    int start = -1;
    for (int v = 0; v < n; ++v) {
      if (!((mask >> v) & 1)) start = v;
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack{start};
    seen[start] = true;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (adj[v][w] && !seen[w] && !((mask >> w) & 1)) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached < n - removed) best = removed;
  }
  return best;
}

// Floyd-Warshall distances over the fibers of `net`.
inline std::vector<std::vector<double>> fiber_distances(const FiberNetwork& net) {
  const std::size_t n = net.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Fiber& f : net.fibers()) {
    d[f.a][f.b] = std::min(d[f.a][f.b], f.length_km);
    d[f.b][f.a] = d[f.a][f.b];
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
    }
  }
  return d;
}

// Unit-capacity bipartite-style max flow on an explicit capacity matrix.
inline int max_flow(std::vector<std::vector<int>> cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  int flow = 0;
  for (;;) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::vector<int> queue{s};
    for (std::size_t i = 0; i < queue.size() && prev[t] < 0; ++i) {
      for (int w = 0; w < n; ++w) {
        if (cap[queue[i]][w] > 0 && prev[w] < 0) {
          prev[w] = queue[i];
          queue.push_back(w);
        }
      }
    }
    if (prev[t] < 0) return flow;
    int push = std::numeric_limits<int>::max();
    for (int v = t; v != s; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    flow += push;
  }
}

}  // namespace rplan::testing
