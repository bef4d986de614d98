// Acceptance runner: one PASS/FAIL line per criterion. Tolerances and sizes
// are fixed here; the exit code is the number of failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rplan/analysis.hpp"
#include "rplan/error.hpp"
#include "rplan/planner.hpp"
#include "rplan/randomnet.hpp"
#include "rplan/rng.hpp"
#include "support.hpp"

using namespace rplan;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kObjectiveTol = 1e-6;
constexpr double kBoundsSeconds = 1.0;
constexpr double kCountsSeconds = 10.0;
constexpr double kEquivalenceSeconds = 300.0;
constexpr double kSweepSeconds = 900.0;
constexpr double kScalingSolveSeconds = 60.0;
constexpr double kScalingExportSeconds = 5.0;
constexpr int kEquivalenceInstances = 200;
constexpr int kRandomIlps = 200;
constexpr int kSweepInstances = 50;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    pass = false;
    if (notes.size() < 12) notes.push_back(why);
  }
  void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RequirementConfig direct(int k, int d, int n_max, double l_max) {
  RequirementConfig c;
  c.base.k = k;
  c.base.d = d;
  c.n_max = n_max;
  c.l_max_km = l_max;
  return c;
}

RequirementConfig base_requirements() { return direct(6, 4, 6, 0.9); }

// 1. Toy-model bounds through the command-line tool.
Verdict bounds_criterion() {
  Verdict v;
  const std::string cmd = std::string(RPLAN_CLI) + " bounds --requirements " +
                          rplan::testing::data_path("default_requirements.json");
  const auto start = Clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    v.fail("cannot run " + cmd);
    return v;
  }
  std::string out;
  std::array<char, 256> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int rc = pclose(pipe);
  const double secs = seconds_since(start);
  if (rc != 0) v.fail("exit status " + std::to_string(rc));
  if (out != "N_max=6\nL_max=136\n") v.fail("output was '" + out + "'");
  if (secs >= kBoundsSeconds) v.fail("took " + fmt("%.3f", secs) + " s");
  v.note("N_max=6, L_max=136 km in " + fmt("%.3f", secs) + " s");
  return v;
}

// 2. Variable counts on complete candidate sets against the closed forms.
Verdict counts_criterion() {
  Verdict v;
  const auto start = Clock::now();
  int cases = 0;
  for (int r = 0; r <= 5; ++r) {
    // sum_{i=0}^{r} r! / (r - i)!
    std::size_t paths = 0, term = 1;
    for (int i = 0; i <= r; ++i) {
      paths += term;
      term *= static_cast<std::size_t>(r - i);
    }
    for (int c = 2; c <= 4; ++c) {
      const FiberNetwork net = rplan::testing::complete_network(r, c);
      const EndNodePairSet q = build_pair_set(net, 0);
      const CandidateLinkSet links = build_candidate_links(net, q);
      const std::size_t pairs = static_cast<std::size_t>(c * (c - 1) / 2);
      for (int k = 1; k <= 3; ++k) {
        const auto req = uniform_requirements(net, q, k, 1, r + 1, 10.0);
        const std::size_t path_vars =
            build_path_based(links, enumerate_paths(links, req, PathEnumerationOptions{false}), req).model.var_count();
        const std::size_t link_vars = build_link_based(links, req).model.var_count();
        const std::size_t want_path = static_cast<std::size_t>(r) + pairs * paths;
        const std::size_t want_link =
            static_cast<std::size_t>(r) + static_cast<std::size_t>(k) * pairs * static_cast<std::size_t>(r * r + r + 1);
        const std::string at = "(|R|,|C|,K)=(" + std::to_string(r) + "," + std::to_string(c) + "," +
                               std::to_string(k) + ")";
        if (path_vars != want_path) {
          v.fail(at + " path-based " + std::to_string(path_vars) + " != " + std::to_string(want_path));
        }
        if (link_vars != want_link) {
          v.fail(at + " link-based " + std::to_string(link_vars) + " != " + std::to_string(want_link));
        }
        ++cases;
      }
    }
  }
  const double secs = seconds_since(start);
  if (secs >= kCountsSeconds) v.fail("took " + fmt("%.2f", secs) + " s");
  v.note(std::to_string(cases) + " size combinations in " + fmt("%.2f", secs) + " s");
  return v;
}

struct SmallCase {
  rplan::testing::SmallInstance inst;
  EndNodePairSet pairs;
  std::uint64_t seed;
};

SmallCase small_case(std::uint64_t seed, int min_nodes, int max_nodes) {
  std::mt19937_64 g(seed);
  const int n = std::uniform_int_distribution<int>(min_nodes, max_nodes)(g);
  const int ends = std::uniform_int_distribution<int>(2, std::min(4, n - 1))(g);
  auto inst = rplan::testing::random_small_instance(g, n, ends);
  EndNodePairSet pairs = build_pair_set(inst.network, seed);
  return {std::move(inst), std::move(pairs), seed};
}

// 3. Path- and link-based optima agree; counterpart assignments are feasible.
Verdict equivalence_criterion() {
  Verdict v;
  const auto start = Clock::now();
  int solved = 0, infeasible = 0, drawn = 0;
  for (std::uint64_t seed = 1; solved < kEquivalenceInstances && seed <= 5000; ++seed) {
    const SmallCase c = small_case(derive_seed(3, seed), 3, 8);
    ++drawn;
    const auto& inst = c.inst;
    const CandidateLinkSet links = build_candidate_links(inst.network, c.pairs);
    const auto req = uniform_requirements(inst.network, c.pairs, inst.k, inst.d, inst.n_max, inst.l_max_km);
    const FormulationArtifacts lf = build_link_based(links, req);
    const SolveResult lr = solve(lf.model);
    std::optional<FormulationArtifacts> pf;
    try {
      pf = build_path_based(links, enumerate_paths(links, req), req);
    } catch (const InfeasibleError&) {
      // No admissible path for some pair: the link model must agree.
      if (lr.status != SolveStatus::Infeasible) v.fail("seed " + std::to_string(seed) + ": path catalog empty");
      ++infeasible;
      continue;
    }
    const SolveResult pr = solve(pf->model);
    const std::string at = "seed " + std::to_string(seed);
    if (lr.status != pr.status) {
      v.fail(at + ": status " + status_name(lr.status) + " vs " + status_name(pr.status));
      continue;
    }
    if (lr.status != SolveStatus::Optimal) {
      ++infeasible;
      continue;
    }
    ++solved;
    if (std::abs(lr.objective - pr.objective) > kObjectiveTol) {
      v.fail(at + ": objectives " + fmt("%g", lr.objective) + " vs " + fmt("%g", pr.objective));
    }
    if (!evaluate(pf->model, link_to_path_assignment(lf, links, *lr.assignment, *pf)).feasible) {
      v.fail(at + ": link->path assignment infeasible");
    }
    if (!evaluate(lf.model, path_to_link_assignment(*pf, *pr.assignment, lf, links)).feasible) {
      v.fail(at + ": path->link assignment infeasible");
    }
  }
  const double secs = seconds_since(start);
  if (solved < kEquivalenceInstances) v.fail("only " + std::to_string(solved) + " instances solved");
  if (secs >= kEquivalenceSeconds) v.fail("took " + fmt("%.1f", secs) + " s");
  v.note(std::to_string(solved) + " optimal and " + std::to_string(infeasible) + " infeasible of " +
         std::to_string(drawn) + " drawn, " + fmt("%.1f", secs) + " s");
  return v;
}

bool same_result(const SolveResult& a, const SolveResult& b) {
  if (a.status != b.status) return false;
  return a.status != SolveStatus::Optimal || std::abs(a.objective - b.objective) <= kObjectiveTol;
}

// 4. Branch and bound against exhaustive enumeration.
Verdict solver_criterion() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 g(404);
  int ilps = 0;
  for (int i = 0; i < kRandomIlps; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 14)(g);
    const IlpModel m = rplan::testing::random_ilp(g, n);
    const SolveResult a = solve(m);
    const SolveResult b = brute_force(m);
    if (!same_result(a, b)) v.fail("random ILP " + std::to_string(i) + " mismatch");
    ++ilps;
  }
  int models = 0;
  const std::size_t cap = 128;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const SmallCase c = small_case(derive_seed(4, seed), 3, 6);
    const auto& inst = c.inst;
    const CandidateLinkSet links = build_candidate_links(inst.network, c.pairs);
    const auto req = uniform_requirements(inst.network, c.pairs, inst.k, inst.d, inst.n_max, inst.l_max_km);
    std::vector<FormulationArtifacts> built;
    built.push_back(build_link_based(links, req));
    built.push_back(build_generalized(links, req));
    built.push_back(build_link_based(links, req, FormulationOptions{true, {}}));
    try {
      built.push_back(build_path_based(links, enumerate_paths(links, req), req));
    } catch (const InfeasibleError&) {
    }
    for (const FormulationArtifacts& f : built) {
      SolveResult b;
      try {
        b = brute_force(f.model, cap);
      } catch (const LimitError& e) {
        v.fail("seed " + std::to_string(seed) + ": " + e.what());
        continue;
      }
      if (!same_result(solve(f.model), b)) {
        v.fail("seed " + std::to_string(seed) + " " + formulation_name(f.kind) + " mismatch");
      }
      ++models;
    }
  }
  v.note(std::to_string(ilps) + " random ILPs and " + std::to_string(models) +
         " formulation models with |N| <= 6, " + fmt("%.1f", seconds_since(start)) + " s");
  return v;
}

// Plan invariants checked from scratch against the network.
void check_plan(const FiberNetwork& net, const DeploymentPlan& p, const std::string& at, Verdict& v) {
  const auto dist = rplan::testing::fiber_distances(net);
  const std::set<NodeIndex> placed(p.repeaters.begin(), p.repeaters.end());
  std::map<NodeIndex, int> usage;
  std::vector<bool> link_used(p.links.size(), false);
  std::map<std::size_t, std::vector<const PlanPath*>> by_pair;
  for (const PlanPath& path : p.paths) by_pair[path.pair].push_back(&path);
  if (p.pairs.size() != net.end_nodes().size() * (net.end_nodes().size() - 1) / 2) {
    v.fail(at + ": pair count");
  }
  for (std::size_t q = 0; q < p.pairs.size(); ++q) {
    const PlanPair& pair = p.pairs[q];
    const auto& paths = by_pair[q];
    if (static_cast<int>(paths.size()) != pair.params.k) v.fail(at + ": pair " + std::to_string(q) + " path count");
    std::set<NodeIndex> interior;
    for (const PlanPath* path : paths) {
      if (path->nodes.size() < 2 || path->nodes.front() != pair.s || path->nodes.back() != pair.t) {
        v.fail(at + ": path endpoints");
        continue;
      }
      if (path->links.size() + 1 != path->nodes.size()) v.fail(at + ": path shape");
      if (static_cast<int>(path->links.size()) > pair.params.n_max + 1) v.fail(at + ": hop bound");
      for (std::size_t h = 0; h < path->links.size(); ++h) {
        const PlanLink& l = p.links[path->links[h]];
        link_used[path->links[h]] = true;
        if (l.u != path->nodes[h] || l.v != path->nodes[h + 1]) v.fail(at + ": link does not follow path");
        if (l.length_km > pair.params.l_max_km + 1e-9) v.fail(at + ": link longer than L_max");
        if (std::abs(l.length_km - dist[l.u][l.v]) > 1e-9) v.fail(at + ": link is not a shortest route");
      }
      for (std::size_t i = 1; i + 1 < path->nodes.size(); ++i) {
        const NodeIndex u = path->nodes[i];
        if (!interior.insert(u).second) v.fail(at + ": paths of a pair share a node");
        if (!placed.count(u)) v.fail(at + ": path uses an unplaced repeater");
        ++usage[u];
      }
    }
  }
  for (NodeIndex r : p.repeaters) {
    if (usage[r] == 0) v.fail(at + ": placed repeater unused");
    if (usage[r] > p.node_d[r]) v.fail(at + ": repeater over capacity");
  }
  for (std::size_t i = 0; i < link_used.size(); ++i) {
    if (!link_used[i]) v.fail(at + ": output link on no path");
  }
  if (p.metrics.repeater_count != p.repeaters.size()) v.fail(at + ": repeater count metric");
  for (const std::string& msg : audit_plan(net, p)) v.fail(at + ": audit: " + msg);
}

// Loop removal on the raw link-based optimum: feasible and idempotent.
void check_cleaning(const FiberNetwork& net, const RequirementConfig& req, const PlanOptions& o,
                    const std::string& at, Verdict& v) {
  PlanOptions lo = o;
  lo.formulation = FormulationKind::LinkBased;
  const PlanModel m = build_plan_model(net, req, lo);
  const SolveResult r = solve(m.formulation.model);
  if (r.status != SolveStatus::Optimal) {
    v.fail(at + ": link model not optimal");
    return;
  }
  const auto paths = extract_paths(m.formulation, m.links, *r.assignment);
  const Assignment clean = remove_loops(m.formulation, m.links, *r.assignment, paths);
  if (!evaluate(m.formulation.model, clean).feasible) v.fail(at + ": cleaned assignment infeasible");
  if (clean.objective_value != r.assignment->objective_value) v.fail(at + ": cleaning changed the objective");
  const Assignment twice = remove_loops(m.formulation, m.links, clean, extract_paths(m.formulation, m.links, clean));
  if (twice.values != clean.values) v.fail(at + ": loop removal not idempotent");
}

// 5. Plan invariants over the corpus.
Verdict audit_criterion() {
  Verdict v;
  const auto start = Clock::now();
  int plans = 0;
  auto run = [&](const FiberNetwork& net, const RequirementConfig& req, PlanOptions o, const std::string& at) {
    for (FormulationKind kind : {FormulationKind::LinkBased, FormulationKind::PathBased, FormulationKind::Generalized}) {
      o.formulation = kind;
      DeploymentPlan p;
      try {
        p = plan(net, req, o);
      } catch (const InfeasibleError&) {
        return;
      } catch (const std::logic_error& e) {
        v.fail(at + ": " + e.what());
        return;
      }
      check_plan(net, p, at + "/" + formulation_name(kind), v);
      const DeploymentPlan back = plan_from_json(net, plan_to_json(p));
      if (!audit_plan(net, back).empty()) v.fail(at + ": reloaded plan rejected");
      ++plans;
    }
    check_cleaning(net, req, o, at, v);
  };

  using rplan::testing::data_path;
  const RequirementConfig toy = load_requirements_file(data_path("default_requirements.json"));
  run(load_network_file(data_path("line.json")), toy, {}, "line");
  run(load_network_file(data_path("diamond.json")), direct(2, 1, 2, 136), {}, "diamond");
  const FiberNetwork demo = load_network_file(data_path("square_demo.json"));
  for (int k = 1; k <= 3; ++k) {
    for (int d = 1; d <= 6; ++d) run(demo, direct(k, d, 3, 0.9), {}, "demo k=" + std::to_string(k) + " d=" + std::to_string(d));
  }
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const SmallCase c = small_case(derive_seed(5, seed), 3, 8);
    PlanOptions o;
    o.seed = seed;
    run(c.inst.network, direct(c.inst.k, c.inst.d, c.inst.n_max, c.inst.l_max_km), o,
        "random " + std::to_string(seed));
  }
  PlanOptions fast;
  fast.diagnose = false;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GeneratedNetwork g = generate_feasible(25, 0.9, derive_seed(6, seed), base_requirements(), fast, 20000);
    PlanOptions o = fast;
    o.formulation = FormulationKind::LinkBased;
    const DeploymentPlan p = plan(g.network, base_requirements(), o);
    check_plan(g.network, p, "n=25 seed " + std::to_string(seed), v);
    check_cleaning(g.network, base_requirements(), o, "n=25 seed " + std::to_string(seed), v);
    ++plans;
  }
  v.note(std::to_string(plans) + " plans audited in " + fmt("%.1f", seconds_since(start)) + " s");
  return v;
}

// 6. Demo graph: premise by path enumeration, claims by planner and by an
// independent subset search.
Verdict demo_criterion() {
  Verdict v;
  const FiberNetwork net = load_network_file(rplan::testing::data_path("square_demo.json"));
  const double l_max = 0.9;
  const int n_max = 3;
  const auto dist = rplan::testing::fiber_distances(net);
  const auto& ends = net.end_nodes();
  const auto& reps = net.repeater_locations();

  // Every admissible path: s, distinct repeaters..., t with every hop within
  // L_max and at most N_max repeaters.
  std::size_t admissible = 0;
  bool premise = true;
  std::function<void(NodeIndex, NodeIndex, std::vector<NodeIndex>&)> walk =
      [&](NodeIndex at, NodeIndex t, std::vector<NodeIndex>& used) {
        if (dist[at][t] <= l_max) {
          ++admissible;
          if (used.size() != 1) premise = false;
        }
        if (static_cast<int>(used.size()) == n_max) return;
        for (NodeIndex r : reps) {
          if (std::find(used.begin(), used.end(), r) != used.end() || dist[at][r] > l_max) continue;
          used.push_back(r);
          walk(r, t, used);
          used.pop_back();
        }
      };
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      std::vector<NodeIndex> used;
      walk(ends[i], ends[j], used);
    }
  }
  if (!premise) v.fail("some admissible path does not use exactly one repeater");
  if (admissible == 0) v.fail("no admissible paths");

  // Smallest repeater set that can host K single-repeater paths per pair
  // with at most D paths per repeater, by max flow.
  const std::size_t pairs = ends.size() * (ends.size() - 1) / 2;
  auto oracle = [&](int k, int d) {
    for (std::size_t size = 0; size <= reps.size(); ++size) {
      for (std::uint32_t mask = 0; mask < (1u << reps.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
        const int nodes = 2 + static_cast<int>(pairs + reps.size());
        std::vector<std::vector<int>> cap(nodes, std::vector<int>(nodes, 0));
        int q = 0;
        for (std::size_t i = 0; i < ends.size(); ++i) {
          for (std::size_t j = i + 1; j < ends.size(); ++j, ++q) {
            cap[0][2 + q] = k;
            for (std::size_t r = 0; r < reps.size(); ++r) {
              if (((mask >> r) & 1) && dist[ends[i]][reps[r]] <= l_max && dist[reps[r]][ends[j]] <= l_max) {
                cap[2 + q][2 + static_cast<int>(pairs + r)] = 1;
              }
            }
          }
        }
        for (std::size_t r = 0; r < reps.size(); ++r) cap[2 + pairs + r][1] = d;
        if (rplan::testing::max_flow(cap, 0, 1) == k * static_cast<int>(pairs)) return static_cast<int>(size);
      }
    }
    return -1;
  };

  std::string got;
  for (int k = 1; k <= 3; ++k) {
    const std::size_t count = plan(net, direct(k, 6, n_max, l_max)).metrics.repeater_count;
    const int best = oracle(k, 6);
    got += " K=" + std::to_string(k) + ":" + std::to_string(count);
    if (count != static_cast<std::size_t>(k)) v.fail("K=" + std::to_string(k) + " placed " + std::to_string(count));
    if (best != k) v.fail("oracle for K=" + std::to_string(k) + " gives " + std::to_string(best));
  }
  for (int d = 1; d <= 3; ++d) {
    const std::size_t count = plan(net, direct(1, d, n_max, l_max)).metrics.repeater_count;
    const int best = oracle(1, d);
    got += " D=" + std::to_string(d) + ":" + std::to_string(count);
    if (count != static_cast<std::size_t>(6 / d)) v.fail("D=" + std::to_string(d) + " placed " + std::to_string(count));
    if (best != 6 / d) v.fail("oracle for D=" + std::to_string(d) + " gives " + std::to_string(best));
  }
  v.note(std::to_string(admissible) + " admissible paths, all with one repeater;" + got);
  return v;
}

// 7. Sweep trends at desk scale.
Verdict sweep_criterion() {
  Verdict v;
  const auto start = Clock::now();
  SweepSetup s;
  s.nodes = 25;
  s.radius = 0.9;
  s.requirements = base_requirements();
  s.options.diagnose = false;
  s.instances = kSweepInstances;
  s.seed = 2024;
  const std::vector<SweepInstance> inst = generate_instances(s);
  int draws = 0;
  for (const SweepInstance& i : inst) draws += i.attempts;
  v.note(std::to_string(inst.size()) + " instances from " + std::to_string(draws) + " draws");

  struct Plan {
    SweepParam param;
    std::vector<double> values;
    int repeaters_sign;     // +1 non-decreasing, -1 non-increasing
    int connectivity_sign;  // direction of the mean connectivity
  };
  const std::vector<Plan> sweeps = {{SweepParam::D, {4, 6, 8}, -1, -1},
                                    {SweepParam::K, {1, 3, 6}, +1, +1},
                                    {SweepParam::LMax, {0.9, 1.2, 1.414}, -1, +1}};
  for (const Plan& sp : sweeps) {
    const SweepTable t = sweep_instances(inst, s, sp.param, sp.values);
    const std::string name = sweep_param_name(sp.param);
    const std::size_t n = inst.size();
    int violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 1; k < sp.values.size(); ++k) {
        const SweepRow& a = t.rows[(k - 1) * n + i];
        const SweepRow& b = t.rows[k * n + i];
        if (a.status != "optimal" || b.status != "optimal") {
          v.fail(name + ": instance " + std::to_string(i) + " not solved to optimality");
          continue;
        }
        const long diff = static_cast<long>(b.repeater_count) - static_cast<long>(a.repeater_count);
        if (diff * sp.repeaters_sign < 0) ++violations;
      }
    }
    if (violations > 0) v.fail(name + ": " + std::to_string(violations) + " monotonicity violations");
    std::string means;
    for (const SweepSummary& m : t.summary) {
      means += " " + fmt("%g", m.value) + ":" + fmt("%.2f", m.mean_repeaters) + "/" + fmt("%.2f", m.mean_connectivity);
    }
    v.note(name + " (value:repeaters/connectivity)" + means);
    const double delta = t.summary.back().mean_connectivity - t.summary.front().mean_connectivity;
    if (delta * sp.connectivity_sign <= 0) {
      v.fail(name + ": mean connectivity moved by " + fmt("%+.2f", delta) + ", expected " +
             (sp.connectivity_sign > 0 ? "an increase" : "a decrease"));
    }
  }
  const double secs = seconds_since(start);
  if (secs >= kSweepSeconds) v.fail("took " + fmt("%.0f", secs) + " s");
  v.note(fmt("%.0f", secs) + " s total");
  return v;
}

// Candidate link count per pair from graph components alone.
std::size_t expected_link_vars(const FiberNetwork& net, const EndNodePairSet& pairs, int k) {
  const std::size_t n = net.node_count();
  std::vector<int> comp(n, -1);
  int c = 0;
  for (NodeIndex s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<NodeIndex> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      for (const Fiber& f : net.fibers()) {
        const NodeIndex w = f.a == u ? f.b : f.b == u ? f.a : u;
        if (w != u && comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    ++c;
  }
  const auto& r = net.repeater_locations();
  std::size_t total = 0;
  for (const EndNodePair& p : pairs.pairs) {
    std::vector<NodeIndex> tails(r.begin(), r.end()), heads(r.begin(), r.end());
    tails.push_back(p.s);
    heads.push_back(p.t);
    for (NodeIndex u : tails) {
      for (NodeIndex w : heads) total += (u != w && comp[u] == comp[w]) ? 1 : 0;
    }
  }
  return r.size() + static_cast<std::size_t>(k) * total;
}

std::size_t binaries_in(const std::string& lp) {
  const std::size_t at = lp.find("\nBinary\n");
  if (at == std::string::npos) return 0;
  std::istringstream in(lp.substr(at + 8));
  std::string w;
  std::size_t n = 0;
  while (in >> w && w != "End") ++n;
  return n;
}

// 8. Scaling smoke test.
Verdict scaling_criterion() {
  Verdict v;
  PlanOptions fast;
  fast.diagnose = false;
  const GeneratedNetwork g = generate_feasible(25, 0.9, 88, base_requirements(), fast, 20000);
  PlanOptions o;
  o.formulation = FormulationKind::LinkBased;
  const auto t0 = Clock::now();
  const DeploymentPlan p = plan(g.network, base_requirements(), o);
  const double solve_s = seconds_since(t0);
  if (solve_s >= kScalingSolveSeconds) v.fail("25-node build+solve took " + fmt("%.1f", solve_s) + " s");
  v.note("25 nodes: " + std::to_string(p.provenance.variables) + " variables, " +
         std::to_string(p.metrics.repeater_count) + " repeaters, " + fmt("%.2f", solve_s) + " s");

  const GeneratedNetwork big = generate_network(100, 0.9, 99);
  const auto t1 = Clock::now();
  const PlanModel m = build_plan_model(big.network, base_requirements(), o);
  const std::string lp = export_lp_text(m.formulation.model);
  const double export_s = seconds_since(t1);
  const std::size_t declared = binaries_in(lp);
  const std::size_t want = expected_link_vars(big.network, m.pairs, 6);
  if (export_s >= kScalingExportSeconds) v.fail("100-node build+export took " + fmt("%.2f", export_s) + " s");
  if (declared != want) v.fail("declared " + std::to_string(declared) + " binaries, expected " + std::to_string(want));
  v.note("100 nodes: " + std::to_string(declared) + " binaries declared, " + fmt("%.2f", export_s) + " s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"toy-model bounds", bounds_criterion},
      {"formulation sizes", counts_criterion},
      {"path/link equivalence", equivalence_criterion},
      {"solver vs brute force", solver_criterion},
      {"plan audit", audit_criterion},
      {"demo-graph claims", demo_criterion},
      {"sweep trends", sweep_criterion},
      {"scaling smoke test", scaling_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%zu] %s %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first);
    for (const std::string& n : v.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
