// rplan: command-line front end for repeater placement.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 no answer (infeasible
// instance, solver limit, or a plan rejected by the audit) with a JSON report
// on stderr.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rplan/analysis.hpp"
#include "rplan/error.hpp"
#include "rplan/planner.hpp"
#include "rplan/randomnet.hpp"
#include "rplan/requirements.hpp"

namespace {

using json = nlohmann::ordered_json;

const char* kFormats = R"(File formats:
  network      {"nodes":[{"id":"a","type":"end"|"repeater","x":0.1,"y":0.2}],
                "fibers":[{"a":"a","b":"r1","length_km":12.5}]}
               x and y are optional but must appear together.
  requirements {"r_min_hz":1,"f_min":0.93,"k":1,"d":1,
                "hardware":{"f_link":0.99,"m":1000,"c_fiber_km_s":200000,"l_att_km":22},
                "n_max":6,"l_max_km":136,
                "per_pair":[{"s":"a","t":"b","k":2,"f_min":0.95,"r_min_hz":2,"n_max":3,"l_max_km":50}],
                "per_node":[{"id":"r1","d":2}]}
               Every key is optional; n_max and l_max_km bypass the derived bounds.
  plan         {"repeaters":[ids],
                "elementary_links":[{"u","v","length_km","fibers":[ids along the route]}],
                "paths":[{"s","t","k","nodes":[ids],"links":[["u","v"],...]}],
                "metrics":{"repeater_count","connectivity"},
                "provenance":{"seed","formulation","n_max","l_max_km","alpha","objective",
                              "solver_nodes","variables","constraints",
                              "pairs":[{"s","t","k","n_max","l_max_km"}],"capacity":{"id":d}}}
  solution     lines "name value" using LP-file variable names, plus an optional
               "status optimal|infeasible|limit-reached" line.
Exit codes: 0 success, 1 usage or I/O error, 2 infeasible, solver limit or
rejected plan (JSON report on stderr).)";

struct Rejected {
  json report;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rplan::InputError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw rplan::InputError("cannot write " + path);
  out << text;
  if (!out) throw rplan::InputError("write failed for " + path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rplan::InputError("bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw rplan::InputError("empty value list");
  return out;
}

struct PlanFlags {
  std::string network;
  std::string requirements;
  std::string formulation = "link";
  std::optional<double> lmax;
  std::optional<int> nmax;
  std::uint64_t seed = 0;
  std::string export_lp;
  std::string out;
  std::optional<double> time_limit;
  std::optional<std::int64_t> node_limit;
  bool strict_rows = false;
  std::optional<double> alpha;
  bool canonical = false;
  std::string external;
};

rplan::PlanOptions plan_options(const PlanFlags& f) {
  rplan::PlanOptions o;
  o.formulation = rplan::parse_formulation(f.formulation);
  o.seed = f.seed;
  o.canonical_pairs = f.canonical;
  o.n_max = f.nmax;
  o.l_max_km = f.lmax;
  o.formulation_options.strict_rows = f.strict_rows;
  o.formulation_options.alpha = f.alpha;
  if (f.time_limit) o.solve.time_limit_s = *f.time_limit;
  if (f.node_limit) o.solve.node_limit = *f.node_limit;
  if (!f.external.empty()) o.external = rplan::ExternalSolverConfig{f.external, "", false};
  return o;
}

rplan::RequirementConfig requirements_or_default(const std::string& path) {
  return path.empty() ? rplan::RequirementConfig{} : rplan::load_requirements_file(path);
}

void add_plan_flags(CLI::App* app, PlanFlags& f, bool need_requirements) {
  app->add_option("--network", f.network, "Network JSON file")->required();
  auto* r = app->add_option("--requirements", f.requirements, "Requirements JSON file");
  if (need_requirements) r->required();
  app->add_option("--formulation", f.formulation, "path, link or generalized")
      ->check(CLI::IsMember({"path", "link", "generalized"}));
  app->add_option("--lmax-km", f.lmax, "Override L_max (network length units)");
  app->add_option("--nmax", f.nmax, "Override N_max");
  app->add_option("--seed", f.seed, "Seed for the end-node pair orientation");
  app->add_flag("--canonical-pairs", f.canonical, "Orient every pair s < t by id");
  app->add_flag("--strict-rows", f.strict_rows, "Emit length and hop limits as rows");
  app->add_option("--alpha", f.alpha, "Length weight of the generalized objective");
}

int run(int argc, char** argv) {
  CLI::App app{"Repeater placement in quantum networks by integer linear programming"};
  app.footer(kFormats);
  app.require_subcommand(1);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Print N_max and L_max from the toy chain model");
  std::string bounds_req;
  bool bounds_json = false;
  bounds_cmd->add_option("--requirements", bounds_req, "Requirements JSON file")->required();
  bounds_cmd->add_flag("--json", bounds_json, "Print JSON instead of key=value lines");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Solve the repeater-allocation problem");
  PlanFlags pf;
  add_plan_flags(plan_cmd, pf, true);
  plan_cmd->add_option("--export-lp", pf.export_lp, "Also write the ILP in LP format");
  plan_cmd->add_option("--out", pf.out, "Plan JSON output (default stdout)");
  plan_cmd->add_option("--time-limit", pf.time_limit, "Solver time limit in seconds");
  plan_cmd->add_option("--node-limit", pf.node_limit, "Solver node limit");
  plan_cmd->add_option("--external", pf.external,
                       "External solver command with {lp} and {sol} placeholders");

  // export
  auto* export_cmd = app.add_subcommand("export", "Write the ILP in LP format without solving");
  PlanFlags ef;
  add_plan_flags(export_cmd, ef, true);
  export_cmd->add_option("--out", ef.export_lp, "LP output file")->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random geometric network");
  int gen_nodes = 25;
  double gen_radius = 0.9;
  std::uint64_t gen_seed = 1;
  bool gen_feasible = false;
  int gen_attempts = 1000;
  PlanFlags gf;
  gen_cmd->add_option("--nodes", gen_nodes, "Number of nodes")->required();
  gen_cmd->add_option("--radius", gen_radius, "Connection radius in (0, sqrt 2]")->required();
  gen_cmd->add_option("--seed", gen_seed, "Seed")->required();
  gen_cmd->add_flag("--ensure-feasible", gen_feasible, "Resample until a plan exists");
  gen_cmd->add_option("--max-attempts", gen_attempts, "Draws before giving up");
  gen_cmd->add_option("--requirements", gf.requirements, "Requirements for --ensure-feasible");
  gen_cmd->add_option("--lmax-km", gf.lmax, "L_max for --ensure-feasible");
  gen_cmd->add_option("--nmax", gf.nmax, "N_max for --ensure-feasible");
  gen_cmd->add_option("--out", gf.out, "Network JSON output (default stdout)");

  // sweep and timing share the instance setup
  auto* sweep_cmd = app.add_subcommand("sweep", "Vary D, K or L_max over random feasible instances");
  auto* timing_cmd = app.add_subcommand("timing", "Solve times for growing network sizes");
  std::string vary;
  std::string values;
  std::string sweep_out;
  std::string summary_out;
  std::string sizes;
  int instances = 50;
  std::uint64_t sweep_seed = 1;
  int nodes = 25;
  double radius = 0.9;
  int k = 6;
  int d = 4;
  double lmax = 0.9;
  int nmax = 6;
  unsigned threads = 0;
  int max_attempts = 20000;
  double time_limit = 60.0;
  sweep_cmd->add_option("--vary", vary, "d, k or lmax")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--summary", summary_out, "Per-value means for plotting");
  sweep_cmd->add_option("--max-attempts", max_attempts, "Draws per instance before giving up");
  timing_cmd->add_option("--sizes", sizes, "Comma-separated node counts")->required();
  for (auto* cmd : {sweep_cmd, timing_cmd}) {
    cmd->add_option("--instances", instances, "Instances per value or size");
    cmd->add_option("--seed", sweep_seed, "Seed")->required();
    cmd->add_option("--out", sweep_out, "CSV output")->required();
    cmd->add_option("--nodes", nodes, "Nodes per instance");
    cmd->add_option("--radius", radius, "Connection radius");
    cmd->add_option("--k", k, "Base K");
    cmd->add_option("--d", d, "Base D");
    cmd->add_option("--lmax", lmax, "Base L_max");
    cmd->add_option("--nmax", nmax, "N_max");
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    cmd->add_option("--time-limit", time_limit, "Per-instance solver time limit in seconds");
  }

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Check a plan against its network");
  std::string audit_plan_file;
  std::string audit_net;
  audit_cmd->add_option("--plan", audit_plan_file, "Plan JSON file")->required();
  audit_cmd->add_option("--network", audit_net, "Network JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*bounds_cmd) {
    const rplan::RequirementConfig cfg = rplan::load_requirements_file(bounds_req);
    const rplan::DerivedBounds b = rplan::resolve_base_bounds(cfg);
    if (bounds_json) {
      json out{{"n_max", b.n_max}, {"l_max_km", b.l_max_km},
               {"l_max_continuous_km", b.l_max_continuous_km}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::printf("N_max=%d\nL_max=%.10g\n", b.n_max, b.l_max_km);
    }
    return 0;
  }

  if (*plan_cmd || *export_cmd) {
    const PlanFlags& f = *plan_cmd ? pf : ef;
    const rplan::FiberNetwork net = rplan::load_network_file(f.network);
    const rplan::RequirementConfig req = rplan::load_requirements_file(f.requirements);
    const rplan::PlanOptions opts = plan_options(f);
    if (!f.export_lp.empty()) {
      const rplan::PlanModel m = rplan::build_plan_model(net, req, opts);
      rplan::export_lp_file(m.formulation.model, f.export_lp);
    }
    if (*export_cmd) return 0;
    const rplan::DeploymentPlan p = rplan::plan(net, req, opts);
    write_output(f.out, rplan::plan_to_json(p));
    return 0;
  }

  if (*gen_cmd) {
    rplan::GeneratedNetwork g = [&]() {
      if (!gen_feasible) return rplan::generate_network(gen_nodes, gen_radius, gen_seed);
      rplan::PlanOptions o = plan_options(gf);
      o.diagnose = false;
      return rplan::generate_feasible(gen_nodes, gen_radius, gen_seed,
                                      requirements_or_default(gf.requirements), o, gen_attempts);
    }();
    write_output(gf.out, rplan::network_to_json(g.network));
    std::cerr << "attempts=" << g.attempts << " instance_seed=" << g.instance_seed << "\n";
    return 0;
  }

  if (*sweep_cmd || *timing_cmd) {
    rplan::SweepSetup setup;
    setup.nodes = nodes;
    setup.radius = radius;
    setup.requirements.base.k = k;
    setup.requirements.base.d = d;
    setup.requirements.n_max = nmax;
    setup.requirements.l_max_km = lmax;
    setup.instances = instances;
    setup.seed = sweep_seed;
    setup.threads = threads;
    setup.max_attempts = max_attempts;
    setup.options.solve.time_limit_s = time_limit;
    if (*sweep_cmd) {
      const rplan::SweepTable t =
          rplan::sweep(setup, rplan::parse_sweep_param(vary), parse_list(values));
      write_output(sweep_out, rplan::sweep_csv(t));
      if (!summary_out.empty()) write_output(summary_out, rplan::sweep_summary_dat(t));
    } else {
      std::vector<int> size_list;
      for (double v : parse_list(sizes)) {
        if (v < 3 || v != std::round(v)) throw rplan::InputError("sizes must be integers >= 3");
        size_list.push_back(static_cast<int>(v));
      }
      write_output(sweep_out, rplan::timing_csv(rplan::timing_harness(size_list, instances, setup)));
    }
    return 0;
  }

  if (*audit_cmd) {
    const rplan::FiberNetwork net = rplan::load_network_file(audit_net);
    const rplan::DeploymentPlan p = rplan::plan_from_json(net, read_file(audit_plan_file));
    std::vector<std::string> problems = rplan::audit_plan(net, p);
    if (problems.empty()) problems = rplan::robustness_check(p);
    if (!problems.empty()) throw Rejected{json{{"status", "rejected"}, {"violations", problems}}};
    std::cout << "plan ok: " << p.metrics.repeater_count << " repeaters, " << p.paths.size()
              << " paths, connectivity " << p.metrics.connectivity << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Rejected& r) {
    std::cerr << r.report.dump(2) << "\n";
    return 2;
  } catch (const rplan::InfeasibleError& e) {
    json report{{"status", "infeasible"},
                {"stage", e.stage()},
                {"reason", e.reason()},
                {"details", e.details()}};
    std::cerr << report.dump(2) << "\n";
    return 2;
  } catch (const rplan::LimitError& e) {
    json report{{"status", "limit-reached"}, {"stage", "solver-limit"}, {"reason", e.what()}};
    std::cerr << report.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
