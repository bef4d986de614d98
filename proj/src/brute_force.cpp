#include <bit>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rplan/error.hpp"
#include "rplan/solver.hpp"

namespace rplan {

namespace {

bool row_ok(double act, Sense s, double rhs) {
  const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
  switch (s) {
    case Sense::LE: return act <= rhs + tol;
    case Sense::GE: return act >= rhs - tol;
    case Sense::EQ: return std::abs(act - rhs) <= tol;
  }
  return false;
}

// Depth-first enumeration in declaration order. A subtree is skipped only
// when interval bounds on the row activities show that no completion is
// feasible, or when even the cheapest completion cannot beat the incumbent.
class PrunedEnumeration {
 public:
  PrunedEnumeration(const IlpModel& model, const std::vector<VarIndex>& free_vars)
      : model_(model), vars_(free_vars), cols_(free_vars.size()) {
    const auto& rows = model.constraints();
    act_.assign(rows.size(), 0.0);
    lo_.assign(rows.size(), 0.0);
    hi_.assign(rows.size(), 0.0);
    std::vector<std::int64_t> slot(model.var_count(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i) slot[vars_[i]] = static_cast<std::int64_t>(i);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const Term& t : rows[r].terms) {
        if (slot[t.var] < 0) continue;
        cols_[static_cast<std::size_t>(slot[t.var])].push_back({r, t.coef});
        lo_[r] += std::min(0.0, t.coef);
        hi_[r] += std::max(0.0, t.coef);
      }
    }
    obj_rest_.assign(vars_.size() + 1, 0.0);
    for (std::size_t i = vars_.size(); i-- > 0;) {
      obj_rest_[i] = obj_rest_[i + 1] + std::min(0.0, model.objective()[vars_[i]]);
    }
    value_.assign(vars_.size(), 0);
  }

  bool run() {
    for (std::size_t r = 0; r < act_.size(); ++r) {
      if (!possible(r)) return false;
    }
    descend(0, 0.0);
    return found_;
  }

  double best() const { return best_; }
  const std::vector<char>& best_values() const { return best_value_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  bool possible(std::size_t r) const {
    const Constraint& c = model_.constraints()[r];
    const double tol = 1e-9 * std::max(1.0, std::abs(c.rhs));
    const bool le_ok = act_[r] + lo_[r] <= c.rhs + tol;
    const bool ge_ok = act_[r] + hi_[r] >= c.rhs - tol;
    switch (c.sense) {
      case Sense::LE: return le_ok;
      case Sense::GE: return ge_ok;
      case Sense::EQ: return le_ok && ge_ok;
    }
    return false;
  }

  void descend(std::size_t i, double obj) {
    ++nodes_;
    if (found_ && obj + obj_rest_[i] >= best_ - 1e-12) return;
    if (i == vars_.size()) {
      found_ = true;
      best_ = obj;
      best_value_ = value_;
      return;
    }
    for (char v : {0, 1}) {
      bool ok = true;
      for (const auto& [r, a] : cols_[i]) {
        lo_[r] -= std::min(0.0, a);
        hi_[r] -= std::max(0.0, a);
        if (v) act_[r] += a;
        ok = ok && possible(r);
      }
      value_[i] = v;
      if (ok) descend(i + 1, obj + (v ? model_.objective()[vars_[i]] : 0.0));
      for (const auto& [r, a] : cols_[i]) {
        lo_[r] += std::min(0.0, a);
        hi_[r] += std::max(0.0, a);
        if (v) act_[r] -= a;
      }
    }
    value_[i] = 0;
  }

  const IlpModel& model_;
  const std::vector<VarIndex>& vars_;
  std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
  std::vector<double> act_, lo_, hi_, obj_rest_;
  std::vector<char> value_, best_value_;
  bool found_ = false;
  double best_ = std::numeric_limits<double>::infinity();
  std::int64_t nodes_ = 0;
};

constexpr std::size_t kGrayCodeMax = 16;

}  // namespace

SolveResult brute_force(const IlpModel& model, std::size_t cap) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<VarIndex> free_vars;
  for (VarIndex v = 0; v < model.var_count(); ++v) {
    if (!model.variable(v).fixed_zero) free_vars.push_back(v);
  }
  if (free_vars.size() > cap) {
    throw LimitError("brute force over " + std::to_string(free_vars.size()) +
                     " free variables exceeds the cap of " + std::to_string(cap));
  }
  if (free_vars.size() > kGrayCodeMax) {
    PrunedEnumeration e(model, free_vars);
    SolveResult result;
    if (e.run()) {
      std::vector<double> x(model.var_count(), 0.0);
      for (std::size_t i = 0; i < free_vars.size(); ++i) x[free_vars[i]] = e.best_values()[i];
      Assignment a = make_assignment(model, std::move(x));
      result.status = SolveStatus::Optimal;
      result.objective = a.objective_value;
      result.dual_bound = a.objective_value;
      result.assignment = std::move(a);
    } else {
      result.status = SolveStatus::Infeasible;
      result.dual_bound = std::numeric_limits<double>::infinity();
    }
    result.nodes = e.nodes();
    result.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start).count();
    return result;
  }

  // Column view restricted to free variables.
  const std::size_t f = free_vars.size();
  std::vector<std::int64_t> slot(model.var_count(), -1);
  for (std::size_t i = 0; i < f; ++i) slot[free_vars[i]] = static_cast<std::int64_t>(i);
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(f);
  const auto& rows = model.constraints();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const Term& t : rows[r].terms) {
      if (slot[t.var] >= 0) cols[static_cast<std::size_t>(slot[t.var])].push_back({r, t.coef});
    }
  }

  std::vector<double> act(rows.size(), 0.0);
  std::size_t violated = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!row_ok(0.0, rows[r].sense, rows[r].rhs)) ++violated;
  }
  double obj = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_code = 0;
  std::uint64_t code = 0;
  if (violated == 0) best = 0.0;

  const std::uint64_t total = std::uint64_t{1} << f;
  for (std::uint64_t t = 1; t < total; ++t) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(t));
    code ^= std::uint64_t{1} << bit;
    const double dir = (code >> bit) & 1 ? 1.0 : -1.0;
    obj += dir * model.objective()[free_vars[bit]];
    for (const auto& [r, a] : cols[bit]) {
      const bool before = row_ok(act[r], rows[r].sense, rows[r].rhs);
      act[r] += dir * a;
      const bool after = row_ok(act[r], rows[r].sense, rows[r].rhs);
      if (before && !after) ++violated;
      if (!before && after) --violated;
    }
    if (violated == 0 && obj < best - 1e-12) {
      best = obj;
      best_code = code;
    }
  }

  SolveResult result;
  result.nodes = static_cast<std::int64_t>(total);
  if (std::isfinite(best)) {
    std::vector<double> x(model.var_count(), 0.0);
    for (std::size_t i = 0; i < f; ++i) {
      if ((best_code >> i) & 1) x[free_vars[i]] = 1.0;
    }
    Assignment a = make_assignment(model, std::move(x));
    result.status = SolveStatus::Optimal;
    result.objective = a.objective_value;
    result.dual_bound = a.objective_value;
    result.assignment = std::move(a);
  } else {
    result.status = SolveStatus::Infeasible;
    result.dual_bound = std::numeric_limits<double>::infinity();
  }
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rplan
