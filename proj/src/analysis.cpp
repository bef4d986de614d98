#include "rplan/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <thread>

#include "rplan/error.hpp"
#include "rplan/rng.hpp"

namespace rplan {

namespace {

// Runs body(i) for i in [0, count) on `threads` workers. The first exception
// (lowest index) is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Requirements and options for one sweep point.
void apply_value(SweepParam param, double value, RequirementConfig& req, PlanOptions& opts) {
  switch (param) {
    case SweepParam::D:
      req.base.d = static_cast<int>(std::lround(value));
      break;
    case SweepParam::K:
      req.base.k = static_cast<int>(std::lround(value));
      break;
    case SweepParam::LMax:
      opts.l_max_km = value;
      req.l_max_km = value;
      break;
  }
}

}  // namespace

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::D: return "d";
    case SweepParam::K: return "k";
    case SweepParam::LMax: return "lmax";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "d" || name == "D") return SweepParam::D;
  if (name == "k" || name == "K") return SweepParam::K;
  if (name == "lmax" || name == "l_max") return SweepParam::LMax;
  throw InputError("unknown sweep parameter '" + std::string(name) + "' (d, k or lmax)");
}

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(xs.size()))};
}

std::vector<SweepInstance> generate_instances(const SweepSetup& setup) {
  if (setup.instances < 1) throw InputError("instance count must be positive");
  std::vector<std::optional<SweepInstance>> out(static_cast<std::size_t>(setup.instances));
  PlanOptions opts = setup.options;
  opts.diagnose = false;
  parallel_for(out.size(), setup.threads, [&](std::size_t i) {
    GeneratedNetwork g = generate_feasible(setup.nodes, setup.radius, derive_seed(setup.seed, i),
                                           setup.requirements, opts, setup.max_attempts);
    out[i] = SweepInstance{static_cast<int>(i), g.instance_seed, g.attempts, std::move(g.network)};
  });
  std::vector<SweepInstance> result;
  for (auto& o : out) result.push_back(std::move(*o));
  return result;
}

SweepTable sweep_instances(const std::vector<SweepInstance>& instances, const SweepSetup& setup,
                           SweepParam param, const std::vector<double>& values) {
  if (values.empty()) throw InputError("sweep needs at least one value");
  const double base_k = setup.requirements.base.k;
  const double base_d = setup.requirements.base.d;
  const std::optional<double> base_l =
      setup.options.l_max_km ? setup.options.l_max_km : setup.requirements.l_max_km;
  for (double v : values) {
    const bool looser = param == SweepParam::D   ? v >= base_d
                        : param == SweepParam::K ? v <= base_k
                                                 : (!base_l || v >= *base_l);
    if (!looser) {
      throw InputError("sweep value " + format_double(v) + " is stricter than the base");
    }
    if ((param == SweepParam::D || param == SweepParam::K) && (v < 1 || v != std::round(v))) {
      throw InputError("sweep value " + format_double(v) + " must be a positive integer");
    }
  }

  SweepTable table;
  table.param = param;
  const std::size_t cells = values.size() * instances.size();
  table.rows.resize(cells);
  parallel_for(cells, setup.threads, [&](std::size_t c) {
    const std::size_t vi = c / instances.size();
    const SweepInstance& inst = instances[c % instances.size()];
    RequirementConfig req = setup.requirements;
    PlanOptions opts = setup.options;
    apply_value(param, values[vi], req, opts);
    SweepRow row{values[vi], inst.id, 0, 0, 0.0, "optimal"};
    try {
      DeploymentPlan p = plan(inst.network, req, opts);
      row.repeater_count = p.metrics.repeater_count;
      row.connectivity = p.metrics.connectivity;
      row.solve_ms = p.provenance.solve_ms;
    } catch (const LimitError&) {
      row.status = "limit-reached";
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("sweep", "instance infeasible at a looser value",
                            {"instance " + std::to_string(inst.id),
                             std::string(sweep_param_name(param)) + " = " + format_double(values[vi]),
                             e.what()});
    }
    table.rows[c] = std::move(row);
  });

  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    std::vector<double> reps;
    std::vector<double> cons;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const SweepRow& r = table.rows[vi * instances.size() + i];
      if (r.status != "optimal") continue;
      reps.push_back(static_cast<double>(r.repeater_count));
      cons.push_back(r.connectivity);
    }
    const auto [mr, sr] = mean_stderr(reps);
    const auto [mc, sc] = mean_stderr(cons);
    table.summary.push_back(SweepSummary{values[vi], static_cast<int>(reps.size()), mr, sr, mc, sc});
  }
  return table;
}

SweepTable sweep(const SweepSetup& setup, SweepParam param, const std::vector<double>& values) {
  return sweep_instances(generate_instances(setup), setup, param, values);
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "param_value,instance_id,repeater_count,connectivity,solve_ms,status\n";
  for (const SweepRow& r : table.rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.solve_ms);
    out += format_double(r.value) + "," + std::to_string(r.instance_id) + "," +
           std::to_string(r.repeater_count) + "," + std::to_string(r.connectivity) + "," + ms +
           "," + r.status + "\n";
  }
  return out;
}

std::string sweep_summary_dat(const SweepTable& table) {
  std::string out = std::string("# ") + sweep_param_name(table.param) +
                    " count mean_repeaters se_repeaters mean_connectivity se_connectivity\n";
  for (const SweepSummary& s : table.summary) {
    out += format_double(s.value) + " " + std::to_string(s.count) + " " +
           format_double(s.mean_repeaters) + " " + format_double(s.se_repeaters) + " " +
           format_double(s.mean_connectivity) + " " + format_double(s.se_connectivity) + "\n";
  }
  return out;
}

TimingTable timing_harness(const std::vector<int>& sizes, int per_size, const SweepSetup& setup) {
  if (per_size < 1) throw InputError("instances per size must be positive");
  TimingTable table;
  const std::size_t per = static_cast<std::size_t>(per_size);
  table.rows.resize(sizes.size() * per);
  parallel_for(table.rows.size(), setup.threads, [&](std::size_t c) {
    const int n = sizes[c / per];
    const int id = static_cast<int>(c % per);
    const std::uint64_t seed = derive_seed(derive_seed(setup.seed, static_cast<std::uint64_t>(n)),
                                           static_cast<std::uint64_t>(id));
    GeneratedNetwork g = generate_network(n, setup.radius, seed);
    TimingRow row{n, id, 0, 0.0, "optimal"};
    const EndNodePairSet pairs = build_pair_set(g.network, setup.options.seed);
    try {
      const CandidateLinkSet links = build_candidate_links(g.network, pairs, setup.options.link_options);
      row.variables = links.repeater_locations().size() +
                      static_cast<std::size_t>(setup.requirements.base.k) * links.total_pair_links();
    } catch (const InfeasibleError&) {
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      plan(g.network, setup.requirements, setup.options);
    } catch (const InfeasibleError&) {
      row.status = "infeasible";
    } catch (const LimitError&) {
      row.status = "censored";
    }
    row.solve_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start).count();
    table.rows[c] = std::move(row);
  });
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    std::vector<double> ms;
    std::vector<double> vars;
    int censored = 0;
    for (std::size_t i = 0; i < per; ++i) {
      const TimingRow& r = table.rows[si * per + i];
      ms.push_back(r.solve_ms);
      vars.push_back(static_cast<double>(r.variables));
      if (r.status == "censored") ++censored;
    }
    const auto [m, se] = mean_stderr(ms);
    table.summary.push_back(TimingSummary{sizes[si], per_size, censored, m, se, mean_stderr(vars).first});
  }
  return table;
}

std::string timing_csv(const TimingTable& table) {
  std::string out = "nodes,instances,censored,mean_ms,stderr_ms,mean_variables\n";
  for (const TimingSummary& s : table.summary) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.3f,%.1f\n", s.nodes, s.count, s.censored,
                  s.mean_ms, s.se_ms, s.mean_variables);
    out += buf;
  }
  return out;
}

}  // namespace rplan
