#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lp_engine.hpp"
#include "rplan/error.hpp"
#include "rplan/solver.hpp"

namespace rplan::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kRefreshEvery = 100;
constexpr std::int64_t kReinvertEvery = 2000;
constexpr std::int64_t kStallLimit = 400;
constexpr double kPerturbation = 1e-7;

// Deterministic value in [0.5, 1) per column, independent of call order.
double perturb_factor(std::size_t j) {
  std::uint64_t z = static_cast<std::uint64_t>(j) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return 0.5 + 0.5 * static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

LpProblem presolve(const IlpModel& model, double feas_tol) {
  LpProblem lp;
  const std::size_t nv = model.var_count();
  lp.column_of.assign(nv, -1);
  for (VarIndex j = 0; j < nv; ++j) {
    if (model.variable(j).fixed_zero) continue;
    lp.column_of[j] = static_cast<std::int64_t>(lp.var_of.size());
    lp.var_of.push_back(j);
    lp.cost.push_back(model.objective()[j]);
  }
  lp.n = lp.var_of.size();

  lp.row_start.push_back(0);
  for (const Constraint& c : model.constraints()) {
    std::size_t before = lp.row_col.size();
    for (const Term& t : c.terms) {
      std::int64_t col = lp.column_of[t.var];
      if (col < 0) continue;
      lp.row_col.push_back(static_cast<std::uint32_t>(col));
      lp.row_val.push_back(t.coef);
    }
    if (lp.row_col.size() == before) {
      bool ok = (c.sense == Sense::LE && 0.0 <= c.rhs + feas_tol) ||
                (c.sense == Sense::GE && 0.0 >= c.rhs - feas_tol) ||
                (c.sense == Sense::EQ && std::abs(c.rhs) <= feas_tol);
      if (!ok) lp.infeasible = true;
      continue;
    }
    lp.row_start.push_back(lp.row_col.size());
    lp.rhs.push_back(c.rhs);
    lp.sense.push_back(c.sense);
  }
  lp.m = lp.rhs.size();

  std::vector<std::size_t> count(lp.n + 1, 0);
  for (std::uint32_t j : lp.row_col) ++count[j + 1];
  for (std::size_t j = 0; j < lp.n; ++j) count[j + 1] += count[j];
  lp.col_start = count;
  lp.col_row.resize(lp.row_col.size());
  lp.col_val.resize(lp.row_col.size());
  for (std::size_t i = 0; i < lp.m; ++i) {
    for (std::size_t e = lp.row_start[i]; e < lp.row_start[i + 1]; ++e) {
      std::size_t at = count[lp.row_col[e]]++;
      lp.col_row[at] = static_cast<std::uint32_t>(i);
      lp.col_val[at] = lp.row_val[e];
    }
  }
  return lp;
}

DualSimplex::DualSimplex(const LpProblem& lp, double feas_tol,
                         const kernels::KernelTable& kernels)
    : lp_(lp), k_(kernels), feas_tol_(feas_tol), n_(lp.n), m_(lp.m) {
  const std::size_t total_cols = total();
  base_cost_.assign(total_cols, 0.0);
  std::copy(lp.cost.begin(), lp.cost.end(), base_cost_.begin());
  cost_ = base_cost_;
  lb_.assign(total_cols, 0.0);
  ub_.assign(total_cols, 1.0);
  for (std::size_t i = 0; i < m_; ++i) {
    switch (lp.sense[i]) {
      case Sense::LE: lb_[n_ + i] = 0.0; ub_[n_ + i] = kInf; break;
      case Sense::GE: lb_[n_ + i] = -kInf; ub_[n_ + i] = 0.0; break;
      case Sense::EQ: lb_[n_ + i] = 0.0; ub_[n_ + i] = 0.0; break;
    }
  }
  val_.assign(total_cols, 0.0);
  d_.assign(total_cols, 0.0);
  state_.assign(total_cols, VarState::AtLower);
  head_.resize(m_);
  position_.assign(total_cols, -1);
  binv_.assign(m_ * m_, 0.0);
  weight_.assign(m_, 1.0);
  alpha_row_.assign(total_cols, 0.0);
  touched_flag_.assign(total_cols, 0);
  alpha_col_.assign(m_, 0.0);
  work_.assign(m_, 0.0);
  x_.assign(n_, 0.0);
  reset_to_slack_basis();
}

void DualSimplex::reset_to_slack_basis() {
  std::fill(binv_.begin(), binv_.end(), 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    head_[i] = static_cast<std::uint32_t>(n_ + i);
    position_[n_ + i] = static_cast<std::int64_t>(i);
    state_[n_ + i] = VarState::Basic;
    binv_[i * m_ + i] = 1.0;
    weight_[i] = 1.0;
  }
  for (std::size_t j = 0; j < n_; ++j) {
    position_[j] = -1;
    d_[j] = cost_[j];
    state_[j] = VarState::AtLower;
    place_nonbasic(j);
  }
  recompute_primal();
  recompute_duals();
  since_reinvert_ = 0;
}

void DualSimplex::place_nonbasic(std::size_t j) {
  const double lo = lb_[j];
  const double hi = ub_[j];
  if (lo == hi) {
    state_[j] = VarState::AtLower;
  } else if (!std::isfinite(lo)) {
    state_[j] = VarState::AtUpper;
  } else if (!std::isfinite(hi)) {
    state_[j] = VarState::AtLower;
  } else if (d_[j] > 0.0) {
    state_[j] = VarState::AtLower;
  } else if (d_[j] < 0.0) {
    state_[j] = VarState::AtUpper;
  } else if (state_[j] != VarState::AtUpper) {
    state_[j] = VarState::AtLower;
  }
  val_[j] = state_[j] == VarState::AtUpper ? hi : lo;
}

void DualSimplex::recompute_primal() {
  for (std::size_t i = 0; i < m_; ++i) work_[i] = lp_.rhs[i];
  for (std::size_t j = 0; j < n_; ++j) {
    if (state_[j] == VarState::Basic || val_[j] == 0.0) continue;
    const double v = val_[j];
    for (std::size_t e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
      work_[lp_.col_row[e]] -= lp_.col_val[e] * v;
    }
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (state_[n_ + i] != VarState::Basic) work_[i] -= val_[n_ + i];
  }
  for (std::size_t r = 0; r < m_; ++r) {
    val_[head_[r]] = k_.dot(binv_row(r), work_.data(), m_);
  }
}

void DualSimplex::recompute_duals() {
  // y = c_B^T B^-1, then d = c - A^T y.
  std::vector<double>& y = work_;
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t r = 0; r < m_; ++r) {
    const double c = cost_[head_[r]];
    if (c != 0.0) k_.axpy(c, binv_row(r), y.data(), m_);
  }
  for (std::size_t j = 0; j < n_; ++j) {
    if (state_[j] == VarState::Basic) {
      d_[j] = 0.0;
      continue;
    }
    double s = cost_[j];
    for (std::size_t e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
      s -= lp_.col_val[e] * y[lp_.col_row[e]];
    }
    d_[j] = s;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    d_[n_ + i] = state_[n_ + i] == VarState::Basic ? 0.0 : cost_[n_ + i] - y[i];
  }
}

void DualSimplex::column_times_binv(std::size_t j, std::vector<double>& out) const {
  if (is_slack(j)) {
    const std::size_t i = j - n_;
    for (std::size_t r = 0; r < m_; ++r) out[r] = binv_[r * m_ + i];
    return;
  }
  const std::size_t b = lp_.col_start[j];
  const std::size_t e = lp_.col_start[j + 1];
  for (std::size_t r = 0; r < m_; ++r) {
    const double* row = binv_row(r);
    double s = 0.0;
    for (std::size_t t = b; t < e; ++t) s += row[lp_.col_row[t]] * lp_.col_val[t];
    out[r] = s;
  }
}

bool DualSimplex::reinvert() {
  ++stats_.reinversions;
  since_reinvert_ = 0;
  // With basic slacks on rows S and basic structurals J facing rows T
  // (|T| = |J|), B^-1 = [[A_TJ^-1, 0], [-A_SJ A_TJ^-1, I]] up to ordering.
  std::vector<std::size_t> cols;
  std::vector<std::int64_t> row_local(m_, -1);
  std::vector<std::size_t> rows_t;
  for (std::size_t r = 0; r < m_; ++r) {
    if (!is_slack(head_[r])) cols.push_back(head_[r]);
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (state_[n_ + i] != VarState::Basic) {
      row_local[i] = static_cast<std::int64_t>(rows_t.size());
      rows_t.push_back(i);
    }
  }
  const std::size_t p = cols.size();
  if (rows_t.size() != p) return false;

  // Augmented [A_TJ | I], Gauss-Jordan with partial pivoting.
  const std::size_t w = 2 * p;
  std::vector<double> aug(p * w, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t j = cols[c];
    for (std::size_t e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
      std::int64_t t = row_local[lp_.col_row[e]];
      if (t >= 0) aug[static_cast<std::size_t>(t) * w + c] = lp_.col_val[e];
    }
  }
  for (std::size_t t = 0; t < p; ++t) aug[t * w + p + t] = 1.0;
  std::vector<std::size_t> row_perm(p);
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t best = c;
    double best_abs = std::abs(aug[c * w + c]);
    for (std::size_t t = c + 1; t < p; ++t) {
      double a = std::abs(aug[t * w + c]);
      if (a > best_abs) {
        best = t;
        best_abs = a;
      }
    }
    if (best_abs < 1e-11) return false;
    if (best != c) {
      std::swap_ranges(aug.begin() + static_cast<std::ptrdiff_t>(c * w),
                       aug.begin() + static_cast<std::ptrdiff_t>((c + 1) * w),
                       aug.begin() + static_cast<std::ptrdiff_t>(best * w));
    }
    double* pr = aug.data() + c * w;
    k_.scale(1.0 / pr[c], pr, w);
    pr[c] = 1.0;
    for (std::size_t t = 0; t < p; ++t) {
      if (t == c) continue;
      double* tr = aug.data() + t * w;
      const double f = tr[c];
      if (f == 0.0) continue;
      k_.axpy(-f, pr, tr, w);
      tr[c] = 0.0;
    }
  }
  // Row c of the right half is row c of A_TJ^-1, i.e. the B^-1 row of the
  // basic structural cols[c], with its columns indexed by rows_t.
  std::fill(binv_.begin(), binv_.end(), 0.0);
  std::vector<std::int64_t> col_local(n_, -1);
  for (std::size_t c = 0; c < p; ++c) col_local[cols[c]] = static_cast<std::int64_t>(c);
  for (std::size_t r = 0; r < m_; ++r) {
    const std::size_t j = head_[r];
    double* out = binv_row(r);
    if (!is_slack(j)) {
      const double* inv = aug.data() + static_cast<std::size_t>(col_local[j]) * w + p;
      for (std::size_t t = 0; t < p; ++t) out[rows_t[t]] = inv[t];
    } else {
      const std::size_t s = j - n_;
      out[s] = 1.0;
      for (std::size_t e = lp_.row_start[s]; e < lp_.row_start[s + 1]; ++e) {
        std::int64_t c = col_local[lp_.row_col[e]];
        if (c < 0) continue;
        const double a = lp_.row_val[e];
        const double* inv = aug.data() + static_cast<std::size_t>(c) * w + p;
        for (std::size_t t = 0; t < p; ++t) out[rows_t[t]] -= a * inv[t];
      }
    }
  }
  for (std::size_t r = 0; r < m_; ++r) weight_[r] = k_.dot(binv_row(r), binv_row(r), m_);
  return true;
}

double DualSimplex::dual_objective() const {
  double z = 0.0;
  for (std::size_t j = 0; j < total(); ++j) {
    if (cost_[j] != 0.0) z += cost_[j] * val_[j];
  }
  return z;
}

double DualSimplex::objective() const {
  double z = 0.0;
  for (std::size_t j = 0; j < n_; ++j) z += base_cost_[j] * val_[j];
  return z;
}

double DualSimplex::perturbation_slack() const {
  // |x_j| <= 1 for structurals; a slack is bounded by |b_i| + sum |a_ij|.
  double total_shift = 0.0;
  for (std::size_t j = 0; j < total(); ++j) {
    const double shift = std::abs(cost_[j] - base_cost_[j]);
    if (shift == 0.0) continue;
    double range = 1.0;
    if (is_slack(j)) {
      const std::size_t i = j - n_;
      range = std::abs(lp_.rhs[i]);
      for (std::size_t e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
        range += std::abs(lp_.row_val[e]);
      }
    }
    total_shift += shift * range;
  }
  return total_shift;
}

void DualSimplex::perturb_costs() {
  for (std::size_t j = 0; j < n_; ++j) {
    if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
    const double delta = kPerturbation * (1.0 + std::abs(base_cost_[j])) * perturb_factor(j);
    const double sign = state_[j] == VarState::AtUpper ? -1.0 : 1.0;
    cost_[j] += sign * delta;
    d_[j] += sign * delta;
  }
  perturbed_ = true;
}

void DualSimplex::restore_costs() {
  cost_ = base_cost_;
  perturbed_ = false;
  recompute_duals();
}

void DualSimplex::set_bounds(std::size_t j, double lb, double ub) {
  lb_[j] = lb;
  ub_[j] = ub;
  if (state_[j] == VarState::Basic) return;
  const double old = val_[j];
  place_nonbasic(j);
  const double delta = val_[j] - old;
  if (delta == 0.0) return;
  column_times_binv(j, alpha_col_);
  for (std::size_t r = 0; r < m_; ++r) val_[head_[r]] -= delta * alpha_col_[r];
}

std::int64_t DualSimplex::choose_leaving() const {
  std::int64_t best = -1;
  double best_score = 0.0;
  std::size_t best_col = total();
  for (std::size_t r = 0; r < m_; ++r) {
    const std::size_t j = head_[r];
    const double v = val_[j];
    double infeas = 0.0;
    if (v > ub_[j] + feas_tol_) {
      infeas = v - ub_[j];
    } else if (v < lb_[j] - feas_tol_) {
      infeas = lb_[j] - v;
    } else {
      continue;
    }
    if (bland_) {
      if (j < best_col) {
        best_col = j;
        best = static_cast<std::int64_t>(r);
      }
      continue;
    }
    const double score = infeas * infeas / weight_[r];
    if (score > best_score) {
      best_score = score;
      best = static_cast<std::int64_t>(r);
    }
  }
  return best;
}

void DualSimplex::compute_pivot_row(std::size_t r) {
  for (std::uint32_t j : touched_) {
    alpha_row_[j] = 0.0;
    touched_flag_[j] = 0;
  }
  touched_.clear();
  const double* rho = binv_row(r);
  // Row-wise costs the lengths of the rows where rho is nonzero; column-wise
  // costs every nonzero of A. Both add the same products in row order.
  std::size_t row_work = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (rho[i] != 0.0) row_work += lp_.row_start[i + 1] - lp_.row_start[i] + 1;
  }
  if (row_work > lp_.row_col.size() + m_) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      double s = 0.0;
      bool any = false;
      for (std::size_t e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
        const double ri = rho[lp_.col_row[e]];
        if (ri == 0.0) continue;
        s += ri * lp_.col_val[e];
        any = true;
      }
      if (!any) continue;
      alpha_row_[j] = s;
      touched_flag_[j] = 1;
      touched_.push_back(static_cast<std::uint32_t>(j));
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = n_ + i;
      if (rho[i] == 0.0 || state_[s] == VarState::Basic) continue;
      alpha_row_[s] = rho[i];
      touched_flag_[s] = 1;
      touched_.push_back(static_cast<std::uint32_t>(s));
    }
    return;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const double ri = rho[i];
    if (ri == 0.0) continue;
    const std::size_t s = n_ + i;
    if (state_[s] != VarState::Basic) {
      alpha_row_[s] = ri;
      touched_flag_[s] = 1;
      touched_.push_back(static_cast<std::uint32_t>(s));
    }
    for (std::size_t e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
      const std::uint32_t j = lp_.row_col[e];
      if (state_[j] == VarState::Basic) continue;
      alpha_row_[j] += ri * lp_.row_val[e];
      if (!touched_flag_[j]) {
        touched_flag_[j] = 1;
        touched_.push_back(j);
      }
    }
  }
}

std::int64_t DualSimplex::ratio_test(double delta) {
  const double sign = delta > 0.0 ? 1.0 : -1.0;
  std::vector<RatioCandidate>& cands = cands_;
  cands.clear();
  for (std::uint32_t j : touched_) {
    if (lb_[j] == ub_[j]) continue;
    const double a = sign * alpha_row_[j];
    if (state_[j] == VarState::AtLower && a > pivot_tol_) {
      double s = std::max(d_[j], 0.0);
      cands.push_back({j, s / a, s, a});
    } else if (state_[j] == VarState::AtUpper && a < -pivot_tol_) {
      double s = std::max(-d_[j], 0.0);
      cands.push_back({j, s / -a, s, -a});
    }
  }
  work_flips_.clear();
  if (cands.empty()) return -1;

  if (bland_) {
    double best = kInf;
    for (const auto& c : cands) best = std::min(best, c.ratio);
    std::int64_t pick = -1;
    for (const auto& c : cands) {
      if (c.ratio <= best + 1e-12 && (pick < 0 || c.col < static_cast<std::uint32_t>(pick))) {
        pick = c.col;
      }
    }
    return pick;
  }

  // Bound-flipping ratio test with Harris tolerances: pass whole groups of
  // breakpoints while the primal infeasibility slope stays positive. The
  // group is every remaining breakpoint below the Harris bound, so no sort
  // is needed.
  double slope = std::abs(delta);
  auto first = cands.begin();
  while (first != cands.end()) {
    double theta_max = kInf;
    for (auto it = first; it != cands.end(); ++it) {
      theta_max = std::min(theta_max, (it->slack + dual_tol_) / it->den);
    }
    const auto last = std::partition(first, cands.end(),
                                     [&](const RatioCandidate& c) { return c.ratio <= theta_max; });
    double drop = 0.0;
    bool all_boxed = true;
    auto best = first;
    for (auto it = first; it != last; ++it) {
      const std::uint32_t j = it->col;
      if (!std::isfinite(lb_[j]) || !std::isfinite(ub_[j])) {
        all_boxed = false;
      } else {
        drop += it->den * (ub_[j] - lb_[j]);
      }
      if (it->den > best->den ||
          (it->den == best->den &&
           (it->ratio < best->ratio || (it->ratio == best->ratio && it->col < best->col)))) {
        best = it;
      }
    }
    if (all_boxed && slope - drop > feas_tol_) {
      for (auto it = first; it != last; ++it) work_flips_.push_back(it->col);
      slope -= drop;
      first = last;
      continue;
    }
    return best->col;
  }
  // Every breakpoint could be flipped and the row stays infeasible.
  work_flips_.clear();
  return -1;
}

bool DualSimplex::iterate() {
  const std::int64_t r_signed = choose_leaving();
  if (r_signed < 0) return false;
  const auto r = static_cast<std::size_t>(r_signed);
  const std::size_t leaving = head_[r];
  const double x_r = val_[leaving];
  const bool up = x_r > ub_[leaving];
  double delta = up ? x_r - ub_[leaving] : x_r - lb_[leaving];

  compute_pivot_row(r);
  const std::int64_t q_signed = ratio_test(delta);
  if (q_signed < 0) {
    infeasible_ = true;
    return false;
  }
  const auto q = static_cast<std::size_t>(q_signed);

  if (!work_flips_.empty()) {
    std::fill(work_.begin(), work_.end(), 0.0);
    for (std::uint32_t j : work_flips_) {
      const bool to_upper = state_[j] == VarState::AtLower;
      const double target = to_upper ? ub_[j] : lb_[j];
      const double step = target - val_[j];
      val_[j] = target;
      state_[j] = to_upper ? VarState::AtUpper : VarState::AtLower;
      if (is_slack(j)) {
        work_[j - n_] += step;
      } else {
        for (std::size_t e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
          work_[lp_.col_row[e]] += lp_.col_val[e] * step;
        }
      }
    }
    work_nz_.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      if (work_[i] != 0.0) work_nz_.push_back(static_cast<std::uint32_t>(i));
    }
    if (work_nz_.size() * 4 < m_) {
      for (std::size_t k = 0; k < m_; ++k) {
        const double* row = binv_row(k);
        double s = 0.0;
        for (std::uint32_t i : work_nz_) s += row[i] * work_[i];
        val_[head_[k]] -= s;
      }
    } else {
      for (std::size_t k = 0; k < m_; ++k) {
        val_[head_[k]] -= k_.dot(binv_row(k), work_.data(), m_);
      }
    }
    // The slope stayed positive, so the row is still violated on the same
    // side; recompute the distance to the bound it leaves at.
    delta = val_[leaving] - (up ? ub_[leaving] : lb_[leaving]);
  }

  column_times_binv(q, alpha_col_);
  const double piv = alpha_col_[r];
  const double piv_row = alpha_row_[q];
  const bool drifted = std::abs(piv - piv_row) > 1e-8 * (1.0 + std::abs(piv));
  if ((drifted && since_reinvert_ > 0) || std::abs(piv) < pivot_tol_) {
    // The basis inverse has drifted; rebuild it and retry.
    if (++pivot_failures_ > 5) throw std::runtime_error("simplex: unstable pivots");
    if (!reinvert()) reset_to_slack_basis();
    recompute_primal();
    recompute_duals();
    return true;
  }

  pivot_failures_ = 0;
  const double theta_d = d_[q] / piv;
  for (std::uint32_t j : touched_) d_[j] -= theta_d * alpha_row_[j];
  d_[q] = 0.0;
  d_[leaving] = -theta_d;

  const double theta_p = delta / piv;
  for (std::size_t k = 0; k < m_; ++k) {
    if (alpha_col_[k] != 0.0) val_[head_[k]] -= theta_p * alpha_col_[k];
  }
  val_[q] += theta_p;
  const double new_q = val_[q];
  const bool to_upper = up;
  val_[leaving] = to_upper ? ub_[leaving] : lb_[leaving];
  state_[leaving] = to_upper ? VarState::AtUpper : VarState::AtLower;
  position_[leaving] = -1;
  head_[r] = static_cast<std::uint32_t>(q);
  position_[q] = static_cast<std::int64_t>(r);
  state_[q] = VarState::Basic;
  val_[q] = new_q;

  double* pr = binv_row(r);
  k_.scale(1.0 / piv, pr, m_);
  weight_[r] = k_.dot(pr, pr, m_);
  for (std::size_t k = 0; k < m_; ++k) {
    if (k == r) continue;
    const double f = alpha_col_[k];
    if (f == 0.0) continue;
    weight_[k] = k_.axpy_norm2(-f, pr, binv_row(k), m_);
  }
  ++stats_.iterations;
  if (bland_) ++stats_.bland_iterations;
  ++since_reinvert_;
  return true;
}

LpStatus DualSimplex::solve(double cutoff, std::int64_t iteration_limit) {
  infeasible_ = false;
  bland_ = false;
  stall_ = 0;
  last_obj_ = -kInf;
  since_refresh_ = 0;
  if (lp_.infeasible) return LpStatus::Infeasible;
  if (!perturbed_) perturb_costs();
  bool retried_infeasible = false;
  std::int64_t iterations = 0;

  auto refresh = [&] {
    since_refresh_ = 0;
    std::vector<double> before(m_);
    for (std::size_t r = 0; r < m_; ++r) before[r] = val_[head_[r]];
    recompute_primal();
    double drift = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      drift = std::max(drift, std::abs(before[r] - val_[head_[r]]));
    }
    if (drift > 1e-8 || since_reinvert_ >= kReinvertEvery) {
      if (!reinvert()) reset_to_slack_basis();
      recompute_primal();
    }
    recompute_duals();
    // Repair small dual infeasibilities: flip boxed columns, shift the cost
    // of the others (the shift is accounted for in the bound).
    bool flipped = false;
    for (std::size_t j = 0; j < total(); ++j) {
      if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
      const bool wrong = (state_[j] == VarState::AtLower && d_[j] < -dual_tol_) ||
                         (state_[j] == VarState::AtUpper && d_[j] > dual_tol_);
      if (!wrong) continue;
      if (std::isfinite(lb_[j]) && std::isfinite(ub_[j])) {
        state_[j] = state_[j] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        val_[j] = state_[j] == VarState::AtUpper ? ub_[j] : lb_[j];
        flipped = true;
      } else {
        cost_[j] -= d_[j];
        d_[j] = 0.0;
        perturbed_ = true;
      }
    }
    if (flipped) recompute_primal();
  };

  for (;;) {
    if (iterations >= iteration_limit) return LpStatus::IterationLimit;
    if (since_refresh_ >= kRefreshEvery) refresh();
    if (iterations % 16 == 0) {
      const double z = dual_objective();
      bound_ = perturbed_ ? z - perturbation_slack() : z;
      if (bound_ >= cutoff) return LpStatus::Cutoff;
      if (z > last_obj_ + 1e-12 * (1.0 + std::abs(z))) {
        last_obj_ = z;
        stall_ = 0;
        bland_ = false;
      } else if ((stall_ += 16) > kStallLimit) {
        bland_ = true;
      }
    }
    const bool progressed = iterate();
    ++iterations;
    ++since_refresh_;
    if (progressed) continue;

    if (infeasible_) {
      if (retried_infeasible) return LpStatus::Infeasible;
      // Confirm on a freshly rebuilt basis before giving up.
      retried_infeasible = true;
      infeasible_ = false;
      if (!reinvert()) reset_to_slack_basis();
      recompute_primal();
      recompute_duals();
      continue;
    }
    if (perturbed_) {
      // Optimal for the shifted costs. Remove the shifts; if the basis stays
      // dual feasible up to bound flips, carry on with the true costs.
      std::vector<double> shifted = cost_;
      restore_costs();
      bool repairable = true;
      for (std::size_t j = 0; j < total() && repairable; ++j) {
        if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
        const bool wrong = (state_[j] == VarState::AtLower && d_[j] < -dual_tol_) ||
                           (state_[j] == VarState::AtUpper && d_[j] > dual_tol_);
        if (wrong && !(std::isfinite(lb_[j]) && std::isfinite(ub_[j]))) repairable = false;
      }
      if (repairable) {
        bool flipped = false;
        for (std::size_t j = 0; j < total(); ++j) {
          if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
          if (state_[j] == VarState::AtLower && d_[j] < -dual_tol_) {
            state_[j] = VarState::AtUpper;
            val_[j] = ub_[j];
            flipped = true;
          } else if (state_[j] == VarState::AtUpper && d_[j] > dual_tol_) {
            state_[j] = VarState::AtLower;
            val_[j] = lb_[j];
            flipped = true;
          }
        }
        if (flipped) {
          recompute_primal();
          continue;
        }
      } else {
        cost_ = std::move(shifted);
        perturbed_ = true;
        recompute_duals();
      }
    }
    const double z = dual_objective();
    bound_ = perturbed_ ? z - perturbation_slack() : z;
    for (std::size_t j = 0; j < n_; ++j) x_[j] = val_[j];
    return LpStatus::Optimal;
  }
}

}  // namespace rplan::detail
