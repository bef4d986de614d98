#include <doctest.h>

#include <cmath>

#include "rplan/error.hpp"
#include "rplan/network.hpp"
#include "support.hpp"

using namespace rplan;
using rplan::testing::data_path;
using rplan::testing::read_file;

namespace {

FiberNetwork line(double a = 1.0, double b = 1.0) {
  return FiberNetwork({{"A", NodeRole::End, {}}, {"r", NodeRole::Repeater, {}}, {"B", NodeRole::End, {}}},
                      {{"A", "r", a}, {"r", "B", b}});
}

}  // namespace

TEST_CASE("network loads from JSON") {
  const FiberNetwork net = load_network_file(data_path("diamond.json"));
  CHECK(net.node_count() == 4);
  CHECK(net.end_nodes().size() == 2);
  CHECK(net.repeater_locations().size() == 2);
  CHECK(net.fibers().size() == 4);
  CHECK(net.id(0) == "r1");  // ids are stored in ascending order
  CHECK_FALSE(net.has_positions());
  CHECK(load_network_file(data_path("square_demo.json")).has_positions());
}

TEST_CASE("network JSON round trip") {
  const FiberNetwork net = load_network_file(data_path("square_demo.json"));
  const FiberNetwork again = load_network(network_to_json(net));
  REQUIRE(again.node_count() == net.node_count());
  REQUIRE(again.fibers().size() == net.fibers().size());
  for (std::size_t i = 0; i < net.fibers().size(); ++i) {
    CHECK(again.fibers()[i].a == net.fibers()[i].a);
    CHECK(again.fibers()[i].length_km == net.fibers()[i].length_km);
  }
  CHECK(network_to_json(again) == network_to_json(net));
}

TEST_CASE("network validation") {
  CHECK_THROWS_WITH_AS(line(0.0, 1.0), doctest::Contains("nonpositive fiber length"), InputError);
  CHECK_THROWS_AS(line(-1.0, 1.0), InputError);
  CHECK_THROWS_AS(line(NAN, 1.0), InputError);
  CHECK_THROWS_AS(FiberNetwork({{"A", NodeRole::End, {}}, {"A", NodeRole::End, {}}}, {}), InputError);
  CHECK_THROWS_AS(FiberNetwork({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}}, {{"A", "C", 1}}),
                  InputError);
  CHECK_THROWS_AS(FiberNetwork({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}}, {{"A", "A", 1}}),
                  InputError);
  CHECK_THROWS_AS(FiberNetwork({{"A", NodeRole::End, {}}, {"r", NodeRole::Repeater, {}}}, {{"A", "r", 1}}),
                  InputError);
  CHECK_THROWS_AS(load_network("{\"nodes\": 3, \"fibers\": []}"), InputError);
  CHECK_THROWS_AS(load_network("not json"), InputError);
  CHECK_THROWS_AS(load_network(R"({"nodes":[{"id":"a","type":"hub"}],"fibers":[]})"), InputError);
  CHECK_THROWS_AS(load_network_file("/nonexistent/net.json"), InputError);
}

TEST_CASE("parallel fibers collapse to the shortest") {
  const FiberNetwork net({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}}, {{"A", "B", 3}, {"B", "A", 2}});
  REQUIRE(net.fibers().size() == 1);
  CHECK(net.fibers()[0].length_km == 2.0);
}

TEST_CASE("end-node pairs") {
  const FiberNetwork two({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}}, {{"A", "B", 1}});
  for (std::uint64_t seed : {0u, 1u, 2u, 99u}) {
    const EndNodePairSet q = build_pair_set(two, seed);
    REQUIRE(q.size() == 1);
    CHECK(q[0].s != q[0].t);
  }
  const FiberNetwork demo = load_network_file(data_path("square_demo.json"));
  const EndNodePairSet q = build_pair_set(demo, 5);
  CHECK(q.size() == 6);
  CHECK(build_pair_set(demo, 5).pairs == q.pairs);
  const EndNodePairSet canon = build_pair_set(demo, 5, true);
  for (const EndNodePair& p : canon.pairs) CHECK(p.s < p.t);
  // Across seeds both orientations of some pair show up.
  bool flipped = false;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    for (const EndNodePair& p : build_pair_set(demo, seed).pairs) flipped = flipped || p.s > p.t;
  }
  CHECK(flipped);
}

TEST_CASE("shortest paths") {
  const FiberNetwork net = line();
  const auto sp = all_pairs_shortest_paths(net);
  const NodeIndex a = net.index_of("A"), r = net.index_of("r"), b = net.index_of("B");
  CHECK(sp.distance(a, b) == 2.0);
  CHECK(sp.route(a, b) == std::vector<NodeIndex>{a, r, b});
  CHECK(sp.route(a, a) == std::vector<NodeIndex>{a});

  const FiberNetwork split({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}, {"C", NodeRole::End, {}}},
                           {{"A", "B", 1}});
  const auto sp2 = all_pairs_shortest_paths(split);
  CHECK(std::isinf(sp2.distance(split.index_of("A"), split.index_of("C"))));
  CHECK(sp2.route(split.index_of("A"), split.index_of("C")).empty());
}

TEST_CASE("shortest paths agree with Floyd-Warshall") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = rplan::testing::random_small_instance(g, 8, 3);
    const auto ref = rplan::testing::fiber_distances(inst.network);
    const auto sp = all_pairs_shortest_paths(inst.network);
    for (NodeIndex i = 0; i < inst.network.node_count(); ++i) {
      for (NodeIndex j = 0; j < inst.network.node_count(); ++j) {
        CHECK(sp.distance(i, j) == doctest::Approx(ref[i][j]));
        const auto route = sp.route(i, j);
        double len = 0.0;
        for (std::size_t h = 1; h < route.size(); ++h) {
          const auto f = inst.network.fiber_between(route[h - 1], route[h]);
          REQUIRE(f.has_value());
          len += inst.network.fibers()[*f].length_km;
        }
        CHECK(len == doctest::Approx(ref[i][j]));
      }
    }
  }
}

TEST_CASE("candidate links") {
  const FiberNetwork net = line();
  const CandidateLinkSet links = build_candidate_links(net, build_pair_set(net, 0, true));
  const NodeIndex a = net.index_of("A"), r = net.index_of("r"), b = net.index_of("B");
  CHECK(links.pair_links(0).size() == 3);
  const auto ab = links.find(a, b);
  REQUIRE(ab.has_value());
  CHECK(links.link(*ab).length_km == 2.0);
  CHECK(links.link(*ab).hops == std::vector<NodeIndex>{a, r, b});
  CHECK(links.link(*ab).fibers.size() == 2);

  const FiberNetwork k4 = rplan::testing::complete_network(2, 2);
  const CandidateLinkSet c = build_candidate_links(k4, build_pair_set(k4, 0));
  CHECK(c.pair_links(0).size() == 7);

  const FiberNetwork bare({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}}, {{"A", "B", 4}});
  const CandidateLinkSet d = build_candidate_links(bare, build_pair_set(bare, 0));
  REQUIRE(d.pair_links(0).size() == 1);
  CHECK(d.link(d.pair_links(0)[0]).length_km == 4.0);
}

TEST_CASE("candidate links of a disconnected pair") {
  const FiberNetwork net = load_network_file(data_path("disconnected.json"));
  try {
    build_candidate_links(net, build_pair_set(net, 0));
    FAIL("expected infeasibility");
  } catch (const InfeasibleError& e) {
    CHECK(e.stage() == "candidate-links");
  }
}

TEST_CASE("candidate links without end-node transit") {
  // A - B - C in a row, all end nodes: (A, C) needs B as a passive hub.
  const FiberNetwork net({{"A", NodeRole::End, {}}, {"B", NodeRole::End, {}}, {"C", NodeRole::End, {}}},
                         {{"A", "B", 1}, {"B", "C", 1}});
  const EndNodePairSet q = build_pair_set(net, 0, true);
  REQUIRE(net.id(q[1].s) == "A");
  REQUIRE(net.id(q[1].t) == "C");
  CHECK(build_candidate_links(net, q).pair_links(1).size() == 1);
  CHECK(build_candidate_links(net, q, CandidateLinkOptions{false}).pair_links(1).empty());
}
