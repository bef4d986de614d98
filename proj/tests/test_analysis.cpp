#include <doctest.h>

#include <sstream>

#include "rplan/analysis.hpp"
#include "rplan/error.hpp"
#include "support.hpp"

using namespace rplan;

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

SweepSetup small_setup() {
  SweepSetup s;
  s.nodes = 10;
  s.radius = 0.9;
  s.requirements.base.k = 2;
  s.requirements.base.d = 2;
  s.requirements.n_max = 4;
  s.requirements.l_max_km = 0.7;
  s.options.diagnose = false;
  s.instances = 4;
  s.seed = 3;
  s.threads = 2;
  return s;
}

}  // namespace

TEST_CASE("vertex connectivity examples") {
  CHECK(vertex_connectivity(4, Edges{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}) == 3);
  CHECK(vertex_connectivity(3, Edges{{0, 1}, {1, 2}}) == 1);
  CHECK(vertex_connectivity(4, Edges{{0, 1}, {2, 3}}) == 0);
  CHECK(vertex_connectivity(4, Edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}}) == 2);
  CHECK(vertex_connectivity(1, Edges{}) == 0);
  CHECK(vertex_connectivity(2, Edges{{0, 1}, {1, 0}}) == 1);
}

TEST_CASE("vertex connectivity matches separator enumeration") {
  std::mt19937_64 g(8);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = std::uniform_int_distribution<int>(2, 10)(g);
    const double p = std::uniform_real_distribution<double>(0.2, 0.95)(g);
    Edges e;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (std::uniform_real_distribution<double>(0, 1)(g) < p) e.emplace_back(a, b);
      }
    }
    CHECK(vertex_connectivity(n, e) == rplan::testing::connectivity_by_cuts(n, e));
  }
}

TEST_CASE("plan connectivity uses end nodes and placed repeaters") {
  const FiberNetwork net = load_network_file(rplan::testing::data_path("square_demo.json"));
  RequirementConfig req;
  req.base.k = 2;
  req.base.d = 6;
  req.n_max = 3;
  req.l_max_km = 0.9;
  const DeploymentPlan p = plan(net, req);
  // Two repeaters each linked to all four corners: K_{2,4}.
  CHECK(p.metrics.connectivity == 2);
  CHECK(vertex_connectivity(p) == 2);
}

TEST_CASE("mean and standard error") {
  CHECK(mean_stderr({}).first == 0.0);
  CHECK(mean_stderr({3.0}) == std::pair<double, double>{3.0, 0.0});
  const auto [m, se] = mean_stderr({1, 2, 3, 4});
  CHECK(m == 2.5);
  CHECK(se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("sweep parameters") {
  CHECK(parse_sweep_param("d") == SweepParam::D);
  CHECK(parse_sweep_param("K") == SweepParam::K);
  CHECK(parse_sweep_param("lmax") == SweepParam::LMax);
  CHECK_THROWS_AS(parse_sweep_param("n"), InputError);
  CHECK(std::string(sweep_param_name(SweepParam::LMax)) == "lmax");
}

TEST_CASE("sweeps on small instances") {
  const SweepSetup s = small_setup();
  const auto inst = generate_instances(s);
  REQUIRE(inst.size() == 4);
  const auto again = generate_instances(s);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    CHECK(inst[i].seed == again[i].seed);
    CHECK(network_to_json(inst[i].network) == network_to_json(again[i].network));
  }

  const SweepTable d = sweep_instances(inst, s, SweepParam::D, {2, 3, 5});
  CHECK(d.rows.size() == 12);
  CHECK(d.summary.size() == 3);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t v = 1; v < 3; ++v) {
      CHECK(d.rows[v * 4 + i].repeater_count <= d.rows[(v - 1) * 4 + i].repeater_count);
    }
  }
  const std::string csv = sweep_csv(d);
  CHECK(csv.rfind("param_value,instance_id,repeater_count,connectivity,solve_ms,status\n", 0) == 0);
  CHECK(count_lines(csv) == 13);
  CHECK(count_lines(sweep_summary_dat(d)) == 4);

  const SweepTable k = sweep_instances(inst, s, SweepParam::K, {1, 2});
  for (std::size_t i = 0; i < inst.size(); ++i) CHECK(k.rows[i].repeater_count <= k.rows[4 + i].repeater_count);

  const SweepTable l = sweep_instances(inst, s, SweepParam::LMax, {0.7, 1.0});
  for (std::size_t i = 0; i < inst.size(); ++i) CHECK(l.rows[4 + i].repeater_count <= l.rows[i].repeater_count);

  CHECK_THROWS_AS(sweep_instances(inst, s, SweepParam::D, {1}), InputError);
  CHECK_THROWS_AS(sweep_instances(inst, s, SweepParam::K, {3}), InputError);
  CHECK_THROWS_AS(sweep_instances(inst, s, SweepParam::LMax, {0.5}), InputError);
  CHECK_THROWS_AS(sweep_instances(inst, s, SweepParam::D, {2.5}), InputError);
  CHECK_THROWS_AS(sweep_instances(inst, s, SweepParam::D, {}), InputError);

  SweepSetup one = s;
  one.threads = 1;
  const SweepTable serial = sweep_instances(inst, one, SweepParam::D, {2, 3, 5});
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].repeater_count == d.rows[i].repeater_count);
    CHECK(serial.rows[i].connectivity == d.rows[i].connectivity);
  }
}

TEST_CASE("limit-reached rows are kept") {
  SweepSetup s = small_setup();
  const auto inst = generate_instances(s);
  s.options.solve.node_limit = 1;
  s.options.branch_repeaters_first = false;
  const SweepTable t = sweep_instances(inst, s, SweepParam::D, {2});
  int optimal = 0;
  for (const SweepRow& r : t.rows) {
    CHECK((r.status == "optimal" || r.status == "limit-reached"));
    optimal += r.status == "optimal";
  }
  CHECK(t.summary[0].count == optimal);
}

TEST_CASE("timing harness") {
  SweepSetup s = small_setup();
  s.requirements.base.k = 1;
  s.options.solve.time_limit_s = 30;
  const TimingTable t = timing_harness({6, 8, 10}, 5, s);
  CHECK(t.rows.size() == 15);
  REQUIRE(t.summary.size() == 3);
  CHECK(t.summary[1].nodes == 8);
  CHECK(t.summary[1].count == 5);
  const std::string csv = timing_csv(t);
  CHECK(csv.rfind("nodes,instances,censored,mean_ms,stderr_ms,mean_variables\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  const TimingTable u = timing_harness({6, 8, 10}, 5, s);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].variables == u.rows[i].variables);
    CHECK(t.rows[i].status == u.rows[i].status);
  }
  CHECK_THROWS_AS(timing_harness({6}, 0, s), InputError);
}
