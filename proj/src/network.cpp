#include "rplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <utility>

#include "rplan/error.hpp"
#include "rplan/rng.hpp"

namespace rplan {

FiberNetwork::FiberNetwork(std::vector<NodeSpec> nodes,
                           std::vector<FiberSpec> fibers) {
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      throw InputError("duplicate node id '" + nodes[i].id + "'");
    }
  }
  for (const auto& n : nodes) {
    if (n.id.empty()) throw InputError("empty node id");
  }
  nodes_ = std::move(nodes);

  std::map<std::pair<NodeIndex, NodeIndex>, double> shortest;
  for (const auto& f : fibers) {
    auto a = find(f.a);
    auto b = find(f.b);
    if (!a) throw InputError("unknown fiber endpoint '" + f.a + "'");
    if (!b) throw InputError("unknown fiber endpoint '" + f.b + "'");
    if (!std::isfinite(f.length_km)) {
      throw InputError("non-finite fiber length on " + f.a + "-" + f.b);
    }
    if (f.length_km <= 0.0) {
      throw InputError("nonpositive fiber length on " + f.a + "-" + f.b);
    }
    if (*a == *b) throw InputError("self-loop fiber at '" + f.a + "'");
    auto key = std::minmax(*a, *b);
    auto [it, inserted] = shortest.emplace(key, f.length_km);
    if (!inserted) it->second = std::min(it->second, f.length_km);
  }
  fibers_.reserve(shortest.size());
  for (const auto& [key, len] : shortest) {
    fibers_.push_back({key.first, key.second, len});
  }

  const std::size_t n = nodes_.size();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& f : fibers_) {
    ++degree[f.a];
    ++degree[f.b];
  }
  adj_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) adj_offset_[i + 1] = adj_offset_[i] + degree[i];
  adj_.resize(adj_offset_[n]);
  std::vector<std::size_t> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (std::size_t e = 0; e < fibers_.size(); ++e) {
    adj_[fill[fibers_[e].a]++] = {fibers_[e].b, e};
    adj_[fill[fibers_[e].b]++] = {fibers_[e].a, e};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[i]),
              adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[i + 1]),
              [](const Adjacency& x, const Adjacency& y) {
                return x.neighbor < y.neighbor;
              });
  }

  for (NodeIndex i = 0; i < n; ++i) {
    (is_end(i) ? end_nodes_ : repeaters_).push_back(i);
  }
  if (end_nodes_.size() < 2) {
    throw InputError("network needs at least 2 end nodes, found " +
                     std::to_string(end_nodes_.size()));
  }
}

std::optional<NodeIndex> FiberNetwork::find(std::string_view id) const {
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), id,
      [](const NodeSpec& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex FiberNetwork::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw InputError("unknown node id '" + std::string(id) + "'");
  return *i;
}

std::span<const Adjacency> FiberNetwork::neighbors(NodeIndex i) const {
  return {adj_.data() + adj_offset_[i], adj_offset_[i + 1] - adj_offset_[i]};
}

std::optional<std::size_t> FiberNetwork::fiber_between(NodeIndex a,
                                                       NodeIndex b) const {
  auto nb = neighbors(a);
  auto it = std::lower_bound(
      nb.begin(), nb.end(), b,
      [](const Adjacency& x, NodeIndex key) { return x.neighbor < key; });
  if (it == nb.end() || it->neighbor != b) return std::nullopt;
  return it->fiber;
}

bool FiberNetwork::has_positions() const {
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [](const NodeSpec& n) { return n.position.has_value(); });
}

EndNodePairSet build_pair_set(const FiberNetwork& net, std::uint64_t seed,
                              bool canonical) {
  EndNodePairSet out;
  out.orientation_seed = seed;
  out.canonical = canonical;
  const auto& c = net.end_nodes();
  Rng rng(seed);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      bool flip = !canonical && rng.coin();
      out.pairs.push_back(flip ? EndNodePair{c[j], c[i]} : EndNodePair{c[i], c[j]});
    }
  }
  return out;
}

ShortestPathTable::ShortestPathTable(const FiberNetwork& net,
                                     std::span<const NodeIndex> sources)
    : net_(&net), n_(net.node_count()), slot_(n_, -1) {
  int count = 0;
  for (NodeIndex s : sources) {
    if (s >= n_) throw InputError("shortest-path source out of range");
    if (slot_[s] < 0) slot_[s] = count++;
  }
  dist_.assign(static_cast<std::size_t>(count) * n_, kInfinity);

  using Item = std::pair<double, NodeIndex>;
  for (NodeIndex s = 0; s < n_; ++s) {
    if (slot_[s] < 0) continue;
    double* d = dist_.data() + static_cast<std::size_t>(slot_[s]) * n_;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    d[s] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > d[u]) continue;
      for (const auto& a : net.neighbors(u)) {
        double nd = du + net.fibers()[a.fiber].length_km;
        if (nd < d[a.neighbor]) {
          d[a.neighbor] = nd;
          heap.push({nd, a.neighbor});
        }
      }
    }
  }
}

const double* ShortestPathTable::row(NodeIndex source) const {
  return dist_.data() + static_cast<std::size_t>(slot_[source]) * n_;
}

double ShortestPathTable::distance(NodeIndex from, NodeIndex to) const {
  if (is_source(from)) return row(from)[to];
  if (is_source(to)) return row(to)[from];
  throw InputError("distance query needs a source endpoint");
}

std::vector<NodeIndex> ShortestPathTable::route(NodeIndex from,
                                                NodeIndex to) const {
  if (!is_source(to)) throw InputError("route query needs `to` as a source");
  const double* d = row(to);
  if (!std::isfinite(d[from])) return {};
  // Walk greedily from `from`, always stepping to the smallest-id neighbor
  // that stays on some shortest route. Since every prefix choice is minimal,
  // the resulting id sequence is the lexicographic minimum.
  std::vector<NodeIndex> out{from};
  NodeIndex cur = from;
  while (cur != to) {
    const double dc = d[cur];
    const double tol = 1e-12 * std::max(1.0, dc);
    NodeIndex next = cur;
    for (const auto& a : net_->neighbors(cur)) {
      double via = net_->fibers()[a.fiber].length_km + d[a.neighbor];
      if (std::abs(via - dc) <= tol) {
        next = a.neighbor;
        break;
      }
    }
    if (next == cur) throw std::logic_error("shortest-route walk stalled");
    out.push_back(next);
    cur = next;
  }
  return out;
}

ShortestPathTable all_pairs_shortest_paths(const FiberNetwork& net,
                                           std::span<const NodeIndex> sources) {
  return ShortestPathTable(net, sources);
}

ShortestPathTable all_pairs_shortest_paths(const FiberNetwork& net) {
  std::vector<NodeIndex> all(net.node_count());
  for (NodeIndex i = 0; i < all.size(); ++i) all[i] = i;
  return ShortestPathTable(net, all);
}

CandidateLinkSet::CandidateLinkSet(const FiberNetwork& net, EndNodePairSet pairs,
                                   const CandidateLinkOptions& options)
    : pairs_(std::move(pairs)),
      n_(net.node_count()),
      ids_(n_),
      repeaters_(net.repeater_locations()),
      index_(n_ * n_, -1) {
  for (NodeIndex i = 0; i < n_; ++i) ids_[i] = net.id(i);
  // Routes are needed towards every node that can be a link head: R and
  // every t. Sources therefore are all of R plus the end nodes.
  std::vector<NodeIndex> sources = repeaters_;
  for (NodeIndex c : net.end_nodes()) sources.push_back(c);
  ShortestPathTable sp(net, sources);

  std::vector<std::string> disconnected;
  for (const auto& q : pairs_.pairs) {
    if (!std::isfinite(sp.distance(q.s, q.t))) {
      disconnected.push_back(net.id(q.s) + " -> " + net.id(q.t));
    }
  }
  if (!disconnected.empty()) {
    throw InfeasibleError("candidate-links",
                          "end-node pair disconnected in fiber network",
                          std::move(disconnected));
  }

  auto admit = [&](NodeIndex u, NodeIndex v) -> std::int32_t {
    std::int32_t& slot = index_[static_cast<std::size_t>(u) * n_ + v];
    if (slot >= 0) return slot;
    if (slot == -2) return -1;
    if (!std::isfinite(sp.distance(u, v))) {
      slot = -2;
      return -1;
    }
    CandidateLink link{u, v, 0.0, sp.route(u, v), {}};
    if (!options.allow_end_node_transit) {
      for (std::size_t i = 1; i + 1 < link.hops.size(); ++i) {
        if (net.is_end(link.hops[i])) {
          slot = -2;
          return -1;
        }
      }
    }
    for (std::size_t i = 0; i + 1 < link.hops.size(); ++i) {
      std::size_t f = *net.fiber_between(link.hops[i], link.hops[i + 1]);
      link.fibers.push_back(f);
      link.length_km += net.fibers()[f].length_km;
    }
    slot = static_cast<std::int32_t>(links_.size());
    links_.push_back(std::move(link));
    return slot;
  };

  per_pair_.resize(pairs_.size());
  for (std::size_t q = 0; q < pairs_.size(); ++q) {
    const NodeIndex s = pairs_[q].s;
    const NodeIndex t = pairs_[q].t;
    std::vector<NodeIndex> tails = repeaters_;
    tails.push_back(s);
    std::sort(tails.begin(), tails.end());
    std::vector<NodeIndex> heads = repeaters_;
    heads.push_back(t);
    std::sort(heads.begin(), heads.end());
    auto& eq = per_pair_[q];
    for (NodeIndex u : tails) {
      for (NodeIndex v : heads) {
        if (u == v) continue;
        std::int32_t idx = admit(u, v);
        if (idx >= 0) eq.push_back(static_cast<LinkIndex>(idx));
      }
    }
  }
  for (auto& slot : index_) {
    if (slot == -2) slot = -1;
  }
}

std::optional<LinkIndex> CandidateLinkSet::find(NodeIndex u, NodeIndex v) const {
  if (u >= n_ || v >= n_) return std::nullopt;
  std::int32_t slot = index_[static_cast<std::size_t>(u) * n_ + v];
  if (slot < 0) return std::nullopt;
  return static_cast<LinkIndex>(slot);
}

std::size_t CandidateLinkSet::total_pair_links() const {
  std::size_t total = 0;
  for (const auto& eq : per_pair_) total += eq.size();
  return total;
}

CandidateLinkSet build_candidate_links(const FiberNetwork& net,
                                       const EndNodePairSet& pairs,
                                       const CandidateLinkOptions& options) {
  for (const auto& q : pairs.pairs) {
    if (q.s >= net.node_count() || q.t >= net.node_count() || q.s == q.t ||
        !net.is_end(q.s) || !net.is_end(q.t)) {
      throw InputError("pair set does not match the network's end nodes");
    }
  }
  return CandidateLinkSet(net, pairs, options);
}

}  // namespace rplan
