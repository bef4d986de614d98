#include <algorithm>
#include <set>

#include "rplan/analysis.hpp"

namespace rplan {

namespace {

// Unit-capacity max flow on the split graph: vertex v becomes v_in = 2v and
// v_out = 2v + 1 joined by an arc of capacity 1; graph edges become arcs of
// capacity n between the out and in halves. Augmenting paths via BFS.
class SplitFlow {
 public:
  SplitFlow(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) : n_(n) {
    head_.assign(2 * n, -1);
    for (std::size_t v = 0; v < n; ++v) add_arc(2 * v, 2 * v + 1, 1);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t w : adj[u]) add_arc(2 * u + 1, 2 * w, static_cast<int>(n));
    }
  }

  // Internally vertex-disjoint s-t paths, stopping once `limit` are found.
  int max_flow(std::size_t s, std::size_t t, int limit) {
    for (std::size_t e = 0; e < cap_.size(); ++e) flow_[e] = 0;
    const std::size_t src = 2 * s + 1;
    const std::size_t dst = 2 * t;
    int total = 0;
    std::vector<std::int64_t> via(2 * n_);
    std::vector<std::size_t> queue;
    while (total < limit) {
      std::fill(via.begin(), via.end(), -1);
      queue.assign(1, src);
      via[src] = -2;
      for (std::size_t i = 0; i < queue.size() && via[dst] == -1; ++i) {
        const std::size_t x = queue[i];
        for (std::int64_t e = head_[x]; e >= 0; e = next_[static_cast<std::size_t>(e)]) {
          const auto ei = static_cast<std::size_t>(e);
          if (flow_[ei] < cap_[ei] && via[to_[ei]] == -1) {
            via[to_[ei]] = e;
            queue.push_back(to_[ei]);
          }
        }
      }
      if (via[dst] == -1) break;
      for (std::size_t x = dst; x != src;) {
        const auto e = static_cast<std::size_t>(via[x]);
        ++flow_[e];
        --flow_[e ^ 1];
        x = to_[e ^ 1];
      }
      ++total;
    }
    return total;
  }

 private:
  void add_arc(std::size_t a, std::size_t b, int c) {
    for (int dir = 0; dir < 2; ++dir) {
      to_.push_back(dir == 0 ? b : a);
      cap_.push_back(dir == 0 ? c : 0);
      flow_.push_back(0);
      next_.push_back(head_[dir == 0 ? a : b]);
      head_[dir == 0 ? a : b] = static_cast<std::int64_t>(to_.size() - 1);
    }
  }

  std::size_t n_;
  std::vector<std::int64_t> head_;
  std::vector<std::int64_t> next_;
  std::vector<std::size_t> to_;
  std::vector<int> cap_;
  std::vector<int> flow_;
};

}  // namespace

int vertex_connectivity(std::size_t n,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (n < 2) return 0;
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (auto [a, b] : edges) {
    if (a == b || adjacent[a][b]) continue;
    adjacent[a][b] = adjacent[b][a] = 1;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  SplitFlow flow(n, adj);
  int best = static_cast<int>(n) - 1;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (adjacent[s][t]) continue;
      best = std::min(best, flow.max_flow(s, t, best));
      if (best == 0) return 0;
    }
  }
  return best;
}

int vertex_connectivity(const DeploymentPlan& plan) {
  std::set<NodeIndex> vertices(plan.repeaters.begin(), plan.repeaters.end());
  for (const PlanPair& p : plan.pairs) {
    vertices.insert(p.s);
    vertices.insert(p.t);
  }
  std::vector<NodeIndex> order(vertices.begin(), vertices.end());
  std::vector<std::int64_t> slot(plan.node_ids.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = static_cast<std::int64_t>(i);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const PlanLink& l : plan.links) {
    if (slot[l.u] < 0 || slot[l.v] < 0) continue;
    edges.emplace_back(static_cast<std::size_t>(slot[l.u]), static_cast<std::size_t>(slot[l.v]));
  }
  return vertex_connectivity(order.size(), edges);
}

}  // namespace rplan
