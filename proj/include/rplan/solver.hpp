#pragma once

// Exact 0/1 ILP solving: LP-based branch-and-bound with a bounded dual
// simplex, exhaustive enumeration as a test oracle, and a bridge that hands
// the model to an external solver through LP files.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rplan/ilp.hpp"

namespace rplan {

enum class SolveStatus { Optimal, Infeasible, LimitReached };
// Reliability: pseudocost scores, with strong-branching probes for
// variables that have too few observations. A probe whose side cannot beat
// the incumbent fixes the variable to the other side at that node.
enum class BranchingRule { Reliability, MostFractional, FirstFractional };
enum class SearchOrder { BestBound, DepthFirst };

const char* status_name(SolveStatus s);  // "optimal", "infeasible", "limit-reached"

struct SolveOptions {
  double int_tol = 1e-6;
  double feas_tol = 1e-7;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double time_limit_s = std::numeric_limits<double>::infinity();
  BranchingRule branching = BranchingRule::Reliability;
  SearchOrder search = SearchOrder::BestBound;
  // Variables branched on before all others when fractional. The fractional
  // and first-fractional rules follow the list order; reliability scores the
  // listed variables as one group. Empty: plain rule.
  std::vector<VarIndex> branch_first;

  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Assignment> assignment;
  double objective = std::numeric_limits<double>::infinity();
  double dual_bound = -std::numeric_limits<double>::infinity();
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_ms = 0.0;
  // Global dual bound after each processed node.
  std::vector<double> bound_trace;
};

SolveResult solve(const IlpModel& model, const SolveOptions& options = {});

enum class LpRelaxStatus { Optimal, Infeasible };

struct LpRelaxResult {
  LpRelaxStatus status = LpRelaxStatus::Infeasible;
  double objective = 0.0;
  double lower_bound = 0.0;
  std::vector<double> x;  // one value per model variable
  std::int64_t iterations = 0;
};

LpRelaxResult lp_relax(const IlpModel& model, const SolveOptions& options = {});

// Exhaustive enumeration over the variables not fixed at 0: Gray code for up
// to 16 free variables, above that depth-first with subtrees skipped only when
// row-activity intervals rule them out. No LP is involved. Throws LimitError
// when more than `cap` variables are free.
SolveResult brute_force(const IlpModel& model, std::size_t cap = 24);

// External solver: the command template receives the LP file path in {lp}
// and the solution path in {sol}. The solution file lists "name value"
// lines; an optional "status <optimal|infeasible|limit-reached>" line sets
// the status (default optimal when values are present).
struct ExternalSolverConfig {
  std::string command;
  std::string work_dir;  // default: the system temp directory
  bool keep_files = false;
};

SolveResult solve_external(const IlpModel& model, const ExternalSolverConfig& config);

// Parses solution text in the format above against the model's LP names.
SolveResult parse_solution_text(const IlpModel& model, const std::string& text);

}  // namespace rplan
