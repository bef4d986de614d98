#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rplan/error.hpp"
#include "rplan/solver.hpp"

namespace rplan {

namespace {

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos;
       pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
  return s;
}

std::string quoted(const std::string& path) {
  std::string out = "'";
  for (char c : path) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

SolveResult parse_solution_text(const IlpModel& model, const std::string& text) {
  const std::vector<std::string> names = lp_variable_names(model);
  std::unordered_map<std::string, VarIndex> index;
  for (VarIndex v = 0; v < names.size(); ++v) index.emplace(names[v], v);

  std::vector<double> x(model.var_count(), 0.0);
  std::optional<SolveStatus> status;
  bool any_value = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::string value;
    if (!(ls >> value)) {
      throw InputError("solution line " + std::to_string(line_no) + ": expected two fields");
    }
    if (key == "status") {
      if (value == "optimal") {
        status = SolveStatus::Optimal;
      } else if (value == "infeasible") {
        status = SolveStatus::Infeasible;
      } else if (value == "limit-reached") {
        status = SolveStatus::LimitReached;
      } else {
        throw InputError("solution line " + std::to_string(line_no) + ": unknown status " + value);
      }
      continue;
    }
    auto it = index.find(key);
    if (it == index.end()) {
      throw InputError("solution line " + std::to_string(line_no) + ": unknown variable " + key);
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw InputError("solution line " + std::to_string(line_no) + ": bad value " + value);
    }
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-6 || (r != 0.0 && r != 1.0)) {
      throw InputError("solution value for " + key + " is not binary: " + value);
    }
    x[it->second] = r;
    any_value = true;
  }

  SolveResult result;
  result.status = status.value_or(any_value ? SolveStatus::Optimal : SolveStatus::Infeasible);
  if (result.status == SolveStatus::Infeasible) {
    result.dual_bound = std::numeric_limits<double>::infinity();
    return result;
  }
  if (!any_value) return result;
  Assignment a = make_assignment(model, std::move(x));
  FeasibilityReport report = evaluate(model, a);
  if (!report.feasible) {
    std::string msg = "external solution violates the model";
    for (const auto& m : report.messages()) msg += "; " + m;
    throw InputError(msg);
  }
  result.objective = a.objective_value;
  if (result.status == SolveStatus::Optimal) result.dual_bound = a.objective_value;
  result.assignment = std::move(a);
  return result;
}

SolveResult solve_external(const IlpModel& model, const ExternalSolverConfig& config) {
  namespace fs = std::filesystem;
  if (config.command.find("{lp}") == std::string::npos ||
      config.command.find("{sol}") == std::string::npos) {
    throw InputError("external solver command must contain {lp} and {sol}");
  }
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = config.work_dir.empty() ? fs::temp_directory_path() : fs::path(config.work_dir);
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  const std::string stem = "rplan_" + std::to_string(stamp);
  const fs::path lp = dir / (stem + ".lp");
  const fs::path sol = dir / (stem + ".sol");
  export_lp_file(model, lp.string());

  std::string cmd = substitute(config.command, "{lp}", quoted(lp.string()));
  cmd = substitute(cmd, "{sol}", quoted(sol.string()));
  const int rc = std::system(cmd.c_str());
  auto cleanup = [&]() {
    if (config.keep_files) return;
    std::error_code ec;
    fs::remove(lp, ec);
    fs::remove(sol, ec);
  };
  if (rc != 0) {
    cleanup();
    throw InputError("external solver exited with status " + std::to_string(rc));
  }
  std::ifstream in(sol);
  if (!in) {
    cleanup();
    throw InputError("external solver wrote no solution file " + sol.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  in.close();
  cleanup();
  SolveResult result = parse_solution_text(model, buf.str());
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rplan
