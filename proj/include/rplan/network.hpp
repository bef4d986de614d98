#pragma once

// Fiber network model, end-node pairs, shortest fiber routes and the
// per-pair candidate elementary links derived from them.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rplan {

using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class NodeRole { End, Repeater };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct NodeSpec {
  std::string id;
  NodeRole role = NodeRole::Repeater;
  std::optional<Point> position;
};

struct FiberSpec {
  std::string a;
  std::string b;
  double length_km = 0.0;
};

struct Fiber {
  NodeIndex a;  // a < b
  NodeIndex b;
  double length_km;
};

struct Adjacency {
  NodeIndex neighbor;
  std::size_t fiber;
};

// Undirected weighted graph G = (N, F, L) with its end nodes C and potential
// repeater locations R = N \ C. Nodes are stored in ascending id order, so
// comparing NodeIndex values compares ids. Parallel fibers are collapsed to
// the shortest one. Immutable after construction.
class FiberNetwork {
 public:
  FiberNetwork(std::vector<NodeSpec> nodes, std::vector<FiberSpec> fibers);

  std::size_t node_count() const { return nodes_.size(); }
  const NodeSpec& node(NodeIndex i) const { return nodes_[i]; }
  const std::string& id(NodeIndex i) const { return nodes_[i].id; }
  bool is_end(NodeIndex i) const { return nodes_[i].role == NodeRole::End; }
  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex index_of(std::string_view id) const;  // throws InputError

  const std::vector<Fiber>& fibers() const { return fibers_; }
  std::span<const Adjacency> neighbors(NodeIndex i) const;
  std::optional<std::size_t> fiber_between(NodeIndex a, NodeIndex b) const;

  const std::vector<NodeIndex>& end_nodes() const { return end_nodes_; }
  const std::vector<NodeIndex>& repeater_locations() const { return repeaters_; }

  bool has_positions() const;

 private:
  std::vector<NodeSpec> nodes_;
  std::vector<Fiber> fibers_;
  std::vector<std::size_t> adj_offset_;
  std::vector<Adjacency> adj_;
  std::vector<NodeIndex> end_nodes_;
  std::vector<NodeIndex> repeaters_;
};

FiberNetwork load_network(std::string_view json_text);
FiberNetwork load_network_file(const std::string& path);
std::string network_to_json(const FiberNetwork& net);

struct EndNodePair {
  NodeIndex s;
  NodeIndex t;
  friend bool operator==(const EndNodePair&, const EndNodePair&) = default;
};

// Q: one orientation per unordered end-node pair. Pairs are listed in
// ascending (min id, max id) order; the orientation of each is drawn from
// the seeded generator (one draw per pair, in list order) unless canonical.
struct EndNodePairSet {
  std::vector<EndNodePair> pairs;
  std::uint64_t orientation_seed = 0;
  bool canonical = false;

  std::size_t size() const { return pairs.size(); }
  const EndNodePair& operator[](std::size_t q) const { return pairs[q]; }
};

EndNodePairSet build_pair_set(const FiberNetwork& net, std::uint64_t seed,
                              bool canonical = false);

// Single-source shortest paths from every node in `sources`. Routes are the
// lexicographically smallest node-id sequence among all shortest routes.
class ShortestPathTable {
 public:
  ShortestPathTable(const FiberNetwork& net, std::span<const NodeIndex> sources);

  bool is_source(NodeIndex n) const { return slot_[n] >= 0; }
  // One of the two endpoints must be a source.
  double distance(NodeIndex from, NodeIndex to) const;
  // `to` must be a source. Empty when unreachable; {from} when from == to.
  std::vector<NodeIndex> route(NodeIndex from, NodeIndex to) const;

 private:
  const double* row(NodeIndex source) const;

  const FiberNetwork* net_;
  std::size_t n_;
  std::vector<int> slot_;
  std::vector<double> dist_;
};

ShortestPathTable all_pairs_shortest_paths(const FiberNetwork& net,
                                           std::span<const NodeIndex> sources);
ShortestPathTable all_pairs_shortest_paths(const FiberNetwork& net);

// Elementary-link candidate (u, v): its shortest fiber route and length.
struct CandidateLink {
  NodeIndex u;
  NodeIndex v;
  double length_km;               // sum of fiber lengths along `fibers`
  std::vector<NodeIndex> hops;    // u, ..., v
  std::vector<std::size_t> fibers;
};

struct CandidateLinkOptions {
  // Routes may pass through other end nodes acting as passive fiber hubs.
  bool allow_end_node_transit = true;
};

// E_q for every q in Q. Links are shared across pairs; each E_q is an index
// list sorted by (u, v).
class CandidateLinkSet {
 public:
  CandidateLinkSet(const FiberNetwork& net, EndNodePairSet pairs,
                   const CandidateLinkOptions& options);

  const EndNodePairSet& pairs() const { return pairs_; }
  std::size_t pair_count() const { return pairs_.size(); }
  const std::vector<CandidateLink>& links() const { return links_; }
  const CandidateLink& link(LinkIndex i) const { return links_[i]; }
  std::span<const LinkIndex> pair_links(std::size_t q) const {
    return per_pair_[q];
  }
  std::optional<LinkIndex> find(NodeIndex u, NodeIndex v) const;
  std::size_t total_pair_links() const;
  const std::vector<NodeIndex>& repeater_locations() const { return repeaters_; }
  std::size_t node_count() const { return n_; }
  const std::string& id(NodeIndex i) const { return ids_[i]; }
  std::string pair_label(std::size_t q) const {
    return ids_[pairs_[q].s] + " -> " + ids_[pairs_[q].t];
  }

 private:
  EndNodePairSet pairs_;
  std::size_t n_;
  std::vector<std::string> ids_;
  std::vector<NodeIndex> repeaters_;
  std::vector<CandidateLink> links_;
  std::vector<std::int32_t> index_;  // n*n, -1 when absent
  std::vector<std::vector<LinkIndex>> per_pair_;
};

// Throws InfeasibleError (stage "candidate-links") if some pair is
// disconnected in G.
CandidateLinkSet build_candidate_links(const FiberNetwork& net,
                                       const EndNodePairSet& pairs,
                                       const CandidateLinkOptions& options = {});

}  // namespace rplan
