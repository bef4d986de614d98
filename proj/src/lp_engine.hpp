#pragma once

// Bounded dual simplex over a revised tableau with an explicit dense basis
// inverse. Internal to the solver; the public entry points are in solver.hpp.

#include <cstdint>
#include <limits>
#include <vector>

#include "rplan/ilp.hpp"
#include "rplan/kernels.hpp"

namespace rplan::detail {

// Presolved LP: structural columns with boxes inside [0, 1], rows
// a_i x (sense) b_i. Kept in both column and row compressed form.
struct LpProblem {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> cost;
  std::vector<std::size_t> col_start;
  std::vector<std::uint32_t> col_row;
  std::vector<double> col_val;
  std::vector<std::size_t> row_start;
  std::vector<std::uint32_t> row_col;
  std::vector<double> row_val;
  std::vector<double> rhs;
  std::vector<Sense> sense;

  // Model variable -> LP column, -1 for variables removed by presolve.
  std::vector<std::int64_t> column_of;
  std::vector<VarIndex> var_of;  // LP column -> model variable
  bool infeasible = false;       // an emptied row is violated
};

// Removes fixed-at-zero variables and rows left without terms.
LpProblem presolve(const IlpModel& model, double feas_tol);

enum class LpStatus { Optimal, Infeasible, Cutoff, IterationLimit };

struct LpStats {
  std::int64_t iterations = 0;
  std::int64_t reinversions = 0;
  std::int64_t bland_iterations = 0;
};

class DualSimplex {
 public:
  DualSimplex(const LpProblem& lp, double feas_tol,
              const kernels::KernelTable& kernels = kernels::active_kernels());

  // Structural bounds; only values inside [0, 1] occur.
  void set_bounds(std::size_t j, double lb, double ub);
  double lower(std::size_t j) const { return lb_[j]; }
  double upper(std::size_t j) const { return ub_[j]; }

  // Stops early with Cutoff once the (monotone) dual objective proves the
  // optimum is at least `cutoff`.
  LpStatus solve(double cutoff = std::numeric_limits<double>::infinity(),
                 std::int64_t iteration_limit = std::numeric_limits<std::int64_t>::max());

  // Valid lower bound on the LP optimum after Optimal or Cutoff.
  double lower_bound() const { return bound_; }
  // Objective of the current primal point under the original costs.
  double objective() const;
  // Structural values; meaningful after Optimal.
  const std::vector<double>& x() const { return x_; }
  const LpStats& stats() const { return stats_; }
  bool bland_mode() const { return bland_; }

 private:
  enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

  struct RatioCandidate {
    std::uint32_t col;
    double ratio;
    double slack;  // |d_j|, clamped at 0
    double den;    // |alpha_rj|
  };

  std::size_t total() const { return n_ + m_; }
  bool is_slack(std::size_t j) const { return j >= n_; }
  double* binv_row(std::size_t r) { return binv_.data() + r * m_; }
  const double* binv_row(std::size_t r) const { return binv_.data() + r * m_; }

  void reset_to_slack_basis();
  bool reinvert();
  void recompute_primal();
  void recompute_duals();
  void place_nonbasic(std::size_t j);
  void column_times_binv(std::size_t j, std::vector<double>& out) const;
  double dual_objective() const;
  double perturbation_slack() const;

  void perturb_costs();
  void restore_costs();

  // One dual simplex iteration. Returns false when no primal infeasibility
  // remains (optimal) and sets infeasible_ if the LP has no solution.
  bool iterate();
  std::int64_t choose_leaving() const;
  void compute_pivot_row(std::size_t r);
  std::int64_t ratio_test(double delta);

  const LpProblem& lp_;
  const kernels::KernelTable& k_;
  double feas_tol_;
  double dual_tol_ = 1e-9;
  double pivot_tol_ = 1e-9;
  std::size_t n_;
  std::size_t m_;

  std::vector<double> cost_;       // working costs, perturbed during solve
  std::vector<double> base_cost_;  // original costs
  std::vector<double> lb_;         // all columns, slacks after structurals
  std::vector<double> ub_;
  std::vector<double> val_;        // current value of every column
  std::vector<double> d_;          // reduced costs
  std::vector<VarState> state_;
  std::vector<std::uint32_t> head_;       // basis position -> column
  std::vector<std::int64_t> position_;    // column -> basis position or -1
  std::vector<double> binv_;              // m x m, row-major
  std::vector<double> weight_;            // squared row norms of binv

  // Scratch.
  std::vector<double> alpha_row_;  // pivot row entries, by column
  std::vector<std::uint32_t> touched_;
  std::vector<char> touched_flag_;
  std::vector<double> alpha_col_;
  std::vector<double> work_;
  std::vector<std::uint32_t> work_nz_;
  std::vector<std::uint32_t> work_flips_;
  std::vector<RatioCandidate> cands_;

  std::vector<double> x_;
  double bound_ = -std::numeric_limits<double>::infinity();
  bool perturbed_ = false;
  double perturb_total_ = 0.0;
  bool infeasible_ = false;
  bool bland_ = false;
  std::int64_t since_refresh_ = 0;
  std::int64_t since_reinvert_ = 0;
  std::int64_t stall_ = 0;
  int pivot_failures_ = 0;
  double last_obj_ = -std::numeric_limits<double>::infinity();
  LpStats stats_;
};

}  // namespace rplan::detail
