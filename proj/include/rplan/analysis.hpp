#pragma once

// Plan metrics and the parameter-sweep and timing harnesses.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rplan/planner.hpp"
#include "rplan/randomnet.hpp"

namespace rplan {

// Global vertex connectivity of an undirected simple graph on n vertices:
// minimum over non-adjacent pairs of the unit node-capacity max flow, and
// n - 1 for complete graphs. 0 when disconnected or n < 2.
int vertex_connectivity(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

// Vertices are the end nodes and placed repeaters; edges are the plan's
// elementary links with (u, v) and (v, u) merged.
int vertex_connectivity(const DeploymentPlan& plan);

enum class SweepParam { D, K, LMax };

const char* sweep_param_name(SweepParam p);  // "d", "k", "lmax"
SweepParam parse_sweep_param(std::string_view name);

struct SweepSetup {
  int nodes = 25;
  double radius = 0.9;
  RequirementConfig requirements;  // base values; l_max/n_max set directly
  PlanOptions options;
  int instances = 50;
  std::uint64_t seed = 1;
  int max_attempts = 20000;  // per instance
  unsigned threads = 0;      // 0: hardware concurrency
};

struct SweepInstance {
  int id = 0;
  std::uint64_t seed = 0;  // seed of the accepted draw
  int attempts = 0;
  FiberNetwork network;
};

struct SweepRow {
  double value = 0.0;
  int instance_id = 0;
  std::size_t repeater_count = 0;
  int connectivity = 0;
  double solve_ms = 0.0;
  std::string status;  // "optimal" or "limit-reached"
};

struct SweepSummary {
  double value = 0.0;
  int count = 0;  // optimal instances
  double mean_repeaters = 0.0;
  double se_repeaters = 0.0;
  double mean_connectivity = 0.0;
  double se_connectivity = 0.0;
};

struct SweepTable {
  SweepParam param = SweepParam::D;
  std::vector<SweepRow> rows;  // by (value, instance_id)
  std::vector<SweepSummary> summary;
};

// Instance i draws from generate_feasible with seed derive_seed(seed, i).
std::vector<SweepInstance> generate_instances(const SweepSetup& setup);

// Plans every instance at every value. Values must be no stricter than the
// base; an instance infeasible at some value throws InfeasibleError with
// stage "sweep".
SweepTable sweep_instances(const std::vector<SweepInstance>& instances, const SweepSetup& setup,
                           SweepParam param, const std::vector<double>& values);

SweepTable sweep(const SweepSetup& setup, SweepParam param, const std::vector<double>& values);

// Header "param_value,instance_id,repeater_count,connectivity,solve_ms,status".
std::string sweep_csv(const SweepTable& table);
// Whitespace-separated summary for plotting tools, one line per value.
std::string sweep_summary_dat(const SweepTable& table);

struct TimingRow {
  int nodes = 0;
  int instance_id = 0;
  std::size_t variables = 0;  // link-based variable count
  double solve_ms = 0.0;
  std::string status;  // "optimal", "infeasible" or "censored"
};

struct TimingSummary {
  int nodes = 0;
  int count = 0;
  int censored = 0;
  double mean_ms = 0.0;
  double se_ms = 0.0;
  double mean_variables = 0.0;
};

struct TimingTable {
  std::vector<TimingRow> rows;
  std::vector<TimingSummary> summary;  // one per size
};

// Plans `per_size` unfiltered instances of each size. The planner's time
// limit marks an instance censored; its time is kept.
TimingTable timing_harness(const std::vector<int>& sizes, int per_size, const SweepSetup& setup);

// Header "nodes,instances,censored,mean_ms,stderr_ms,mean_variables".
std::string timing_csv(const TimingTable& table);

// Mean and standard error of the mean (0 for fewer than two samples).
std::pair<double, double> mean_stderr(const std::vector<double>& xs);

}  // namespace rplan
