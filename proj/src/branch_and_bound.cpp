#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>

#include "lp_engine.hpp"
#include "rplan/error.hpp"
#include "rplan/solver.hpp"

namespace rplan {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitReached: return "limit-reached";
  }
  return "?";
}

void SolveOptions::validate() const {
  if (!(int_tol > 0.0 && int_tol < 1e-3)) throw InputError("int_tol must lie in (0, 1e-3)");
  if (!(feas_tol > 0.0 && feas_tol < 1e-3)) throw InputError("feas_tol must lie in (0, 1e-3)");
  if (node_limit <= 0) throw InputError("node limit must be positive");
  if (!(time_limit_s > 0.0)) throw InputError("time limit must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Fix {
  std::uint32_t col;
  std::uint8_t value;
};

struct Node {
  std::vector<Fix> fixes;
  double bound;
  int depth;
  std::int64_t id;
  // Branching that created the node, for the pseudocost update.
  std::int64_t branch_col = -1;
  std::uint8_t branch_dir = 0;
  double branch_frac = 0.0;
  double parent_lp = 0.0;
};

constexpr int kReliable = 4;             // observations per direction
constexpr int kStrongPerNode = 8;        // probes per node
constexpr std::int64_t kProbeIterations = 200;

// Per-column average bound gain per unit of fractionality, by direction.
class Pseudocosts {
 public:
  explicit Pseudocosts(std::size_t n) : sum_{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)},
                                        count_{std::vector<int>(n, 0), std::vector<int>(n, 0)} {}

  void record(std::size_t c, int dir, double gain, double frac) {
    if (!(frac > 1e-9) || !std::isfinite(gain)) return;
    const double unit = std::max(gain, 0.0) / frac;
    sum_[dir][c] += unit;
    ++count_[dir][c];
    all_sum_[dir] += unit;
    ++all_count_[dir];
  }
  bool reliable(std::size_t c) const {
    return count_[0][c] >= kReliable && count_[1][c] >= kReliable;
  }
  double estimate(std::size_t c, int dir) const {
    if (count_[dir][c] > 0) return sum_[dir][c] / count_[dir][c];
    return all_count_[dir] > 0 ? all_sum_[dir] / all_count_[dir] : 1.0;
  }

 private:
  std::array<std::vector<double>, 2> sum_;
  std::array<std::vector<int>, 2> count_;
  std::array<double, 2> all_sum_{0.0, 0.0};
  std::array<std::int64_t, 2> all_count_{0, 0};
};

double branch_score(double down, double up) {
  return std::max(down, 1e-6) * std::max(up, 1e-6);
}

struct NodeOrder {
  const std::vector<Node>* nodes;
  // Priority queue puts the "largest" on top; the best node is the one with
  // the lowest bound, then the deepest, then the newest.
  bool operator()(std::size_t a, std::size_t b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.bound != y.bound) return x.bound > y.bound;
    if (x.depth != y.depth) return x.depth < y.depth;
    return x.id < y.id;
  }
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

LpRelaxResult lp_relax(const IlpModel& model, const SolveOptions& options) {
  options.validate();
  detail::LpProblem lp = detail::presolve(model, options.feas_tol);
  LpRelaxResult out;
  out.x.assign(model.var_count(), 0.0);
  if (lp.infeasible) return out;
  detail::DualSimplex engine(lp, options.feas_tol);
  detail::LpStatus st = engine.solve();
  out.iterations = engine.stats().iterations;
  if (st != detail::LpStatus::Optimal) return out;
  out.status = LpRelaxStatus::Optimal;
  for (std::size_t c = 0; c < lp.n; ++c) out.x[lp.var_of[c]] = engine.x()[c];
  out.objective = model.objective_value(out.x);
  out.lower_bound = engine.lower_bound();
  return out;
}

SolveResult solve(const IlpModel& model, const SolveOptions& options) {
  options.validate();
  const auto start = Clock::now();
  SolveResult result;
  detail::LpProblem lp = detail::presolve(model, options.feas_tol);
  if (lp.infeasible) {
    result.wall_ms = elapsed_ms(start);
    return result;
  }
  const std::size_t n = lp.n;
  const bool integral = model.objective_integral();

  // A node whose bound reaches the cutoff cannot improve on the incumbent.
  double incumbent = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent_x;
  auto cutoff = [&]() {
    if (!std::isfinite(incumbent)) return incumbent;
    if (integral) return incumbent - 1.0 + 2e-6;
    return incumbent - 1e-7 * std::max(1.0, std::abs(incumbent));
  };
  auto report_bound = [&](double b) {
    return integral && std::isfinite(b) ? std::ceil(b - 1e-6) : b;
  };

  std::vector<std::int64_t> priority(n, -1);
  for (std::size_t i = 0; i < options.branch_first.size(); ++i) {
    VarIndex v = options.branch_first[i];
    if (v >= model.var_count()) throw InputError("branch_first names an unknown variable");
    std::int64_t c = lp.column_of[v];
    if (c >= 0 && priority[static_cast<std::size_t>(c)] < 0) {
      priority[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(i);
    }
  }

  detail::DualSimplex engine(lp, options.feas_tol);
  Pseudocosts pseudo(n);
  std::vector<Node> nodes;
  std::vector<std::size_t> stack;
  std::priority_queue<std::size_t, std::vector<std::size_t>, NodeOrder> heap(
      NodeOrder{&nodes});
  std::multiset<double> open_bounds;
  const bool depth_first = options.search == SearchOrder::DepthFirst;

  auto push = [&](Node node) {
    open_bounds.insert(node.bound);
    nodes.push_back(std::move(node));
    if (depth_first) {
      stack.push_back(nodes.size() - 1);
    } else {
      heap.push(nodes.size() - 1);
    }
  };
  auto pop = [&]() {
    std::size_t idx;
    if (depth_first) {
      idx = stack.back();
      stack.pop_back();
    } else {
      idx = heap.top();
      heap.pop();
    }
    open_bounds.erase(open_bounds.find(nodes[idx].bound));
    return idx;
  };
  auto global_bound = [&](double extra) {
    double b = std::min(extra, incumbent);
    if (!open_bounds.empty()) b = std::min(b, *open_bounds.begin());
    return b;
  };

  std::int64_t next_id = 0;
  push(Node{{}, -std::numeric_limits<double>::infinity(), 0, next_id++});

  std::vector<std::int8_t> applied(n, -1);
  std::vector<std::uint32_t> applied_cols;
  std::vector<std::int8_t> target(n, -1);
  double trace_max = -std::numeric_limits<double>::infinity();
  bool limit_hit = false;
  double limit_bound = std::numeric_limits<double>::infinity();

  while (!(depth_first ? stack.empty() : heap.empty())) {
    if (result.nodes >= options.node_limit ||
        elapsed_ms(start) > options.time_limit_s * 1000.0) {
      limit_hit = true;
      break;
    }
    const std::size_t idx = pop();
    Node node = std::move(nodes[idx]);
    nodes[idx].fixes.clear();
    nodes[idx].fixes.shrink_to_fit();
    if (node.bound >= cutoff()) continue;

    // Move the engine's bounds from the previous node to this one.
    for (const Fix& f : node.fixes) target[f.col] = static_cast<std::int8_t>(f.value);
    std::vector<std::uint32_t> still;
    for (std::uint32_t c : applied_cols) {
      if (target[c] < 0) {
        engine.set_bounds(c, 0.0, 1.0);
        applied[c] = -1;
      } else {
        still.push_back(c);
      }
    }
    applied_cols.swap(still);
    for (const Fix& f : node.fixes) {
      if (applied[f.col] != static_cast<std::int8_t>(f.value)) {
        if (applied[f.col] < 0) applied_cols.push_back(f.col);
        applied[f.col] = static_cast<std::int8_t>(f.value);
        engine.set_bounds(f.col, f.value, f.value);
      }
      target[f.col] = -1;
    }

    detail::LpStatus st = engine.solve(cutoff());
    ++result.nodes;
    auto record = [&](double extra) {
      double g = report_bound(global_bound(extra));
      trace_max = std::max(trace_max, g);
      result.bound_trace.push_back(trace_max);
    };
    if (st != detail::LpStatus::Optimal) {
      record(std::numeric_limits<double>::infinity());
      continue;
    }
    if (node.branch_col >= 0) {
      pseudo.record(static_cast<std::size_t>(node.branch_col), node.branch_dir,
                    engine.lower_bound() - node.parent_lp, node.branch_frac);
    }
    double bound = std::max(engine.lower_bound(), node.bound);
    if (bound >= cutoff()) {
      record(std::numeric_limits<double>::infinity());
      continue;
    }

    // Keeps the engine's bound bookkeeping in step with a fixing made at
    // this node.
    auto fix_here = [&](std::uint32_t c, std::uint8_t v) {
      node.fixes.push_back({c, v});
      if (applied[c] < 0) applied_cols.push_back(c);
      applied[c] = static_cast<std::int8_t>(v);
      engine.set_bounds(c, v, v);
    };
    auto try_incumbent = [&](const std::vector<double>& xv) {
      for (std::size_t c = 0; c < n; ++c) {
        if (std::min(xv[c], 1.0 - xv[c]) > options.int_tol) return;
      }
      std::vector<double> full(model.var_count(), 0.0);
      for (std::size_t c = 0; c < n; ++c) full[lp.var_of[c]] = std::round(xv[c]);
      Assignment a = make_assignment(model, full);
      if (a.objective_value < incumbent && evaluate(model, a).feasible) {
        incumbent = a.objective_value;
        incumbent_x = std::move(full);
      }
    };

    std::vector<double> x;
    std::int64_t branch = -1;
    std::array<double, 2> child_bound{bound, bound};
    bool pruned = false;
    for (;;) {
      x = engine.x();
      branch = -1;
      child_bound = {bound, bound};
      if (options.branching != BranchingRule::Reliability) {
        double branch_score_best = -1.0;
        std::int64_t branch_priority = std::numeric_limits<std::int64_t>::max();
        for (std::size_t c = 0; c < n; ++c) {
          const double frac = std::min(x[c], 1.0 - x[c]);
          if (frac <= options.int_tol) continue;
          const std::int64_t pr =
              priority[c] >= 0 ? priority[c] : std::numeric_limits<std::int64_t>::max() - 1;
          const bool most = options.branching == BranchingRule::MostFractional;
          if (pr < branch_priority || (most && pr == branch_priority && frac > branch_score_best)) {
            branch = static_cast<std::int64_t>(c);
            branch_score_best = frac;
            branch_priority = pr;
          }
        }
        break;
      }

      // Candidates: fractional columns of the first group that has any.
      std::vector<std::uint32_t> cands;
      bool listed = false;
      for (std::size_t c = 0; c < n; ++c) {
        if (std::min(x[c], 1.0 - x[c]) <= options.int_tol) continue;
        const bool in_list = priority[c] >= 0;
        if (in_list && !listed) {
          cands.clear();
          listed = true;
        }
        if (in_list == listed) cands.push_back(static_cast<std::uint32_t>(c));
      }
      if (cands.empty()) break;
      std::stable_sort(cands.begin(), cands.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::min(x[a], 1.0 - x[a]) > std::min(x[b], 1.0 - x[b]);
      });

      double best_score = -1.0;
      int probes = 0;
      bool refixed = false;
      for (std::uint32_t c : cands) {
        const double down = x[c];
        const double up = 1.0 - x[c];
        double score;
        std::array<double, 2> cb{bound, bound};
        if (!pseudo.reliable(c) && probes < kStrongPerNode) {
          ++probes;
          for (int v = 0; v < 2; ++v) {
            engine.set_bounds(c, v, v);
            const detail::LpStatus ps = engine.solve(cutoff(), kProbeIterations);
            if (ps == detail::LpStatus::Infeasible || ps == detail::LpStatus::Cutoff) {
              cb[v] = std::numeric_limits<double>::infinity();
            } else {
              cb[v] = std::max(bound, engine.lower_bound());
              if (ps == detail::LpStatus::Optimal) try_incumbent(engine.x());
            }
          }
          engine.set_bounds(c, 0.0, 1.0);
          if (cb[0] >= cutoff() && cb[1] >= cutoff()) {
            pruned = true;
            break;
          }
          if (cb[0] >= cutoff() || cb[1] >= cutoff()) {
            fix_here(c, cb[0] >= cutoff() ? 1 : 0);
            refixed = true;
            break;
          }
          pseudo.record(c, 0, cb[0] - bound, down);
          pseudo.record(c, 1, cb[1] - bound, up);
          score = branch_score(cb[0] - bound, cb[1] - bound);
        } else {
          score = branch_score(down * pseudo.estimate(c, 0), up * pseudo.estimate(c, 1));
        }
        if (score > best_score) {
          best_score = score;
          branch = c;
          child_bound = cb;
        }
      }
      if (pruned || !refixed) break;
      // Re-solve the node with the new fixing and choose again.
      st = engine.solve(cutoff());
      if (st != detail::LpStatus::Optimal) {
        pruned = true;
        break;
      }
      bound = std::max(bound, engine.lower_bound());
      if (bound >= cutoff()) {
        pruned = true;
        break;
      }
    }
    // A probe may have found an incumbent that cuts this node off.
    if (pruned || bound >= cutoff()) {
      record(std::numeric_limits<double>::infinity());
      continue;
    }
    // Probes moved the engine; the children start from x and `bound`.

    if (branch < 0) {
      std::vector<double> full(model.var_count(), 0.0);
      for (std::size_t c = 0; c < n; ++c) full[lp.var_of[c]] = std::round(x[c]);
      Assignment a = make_assignment(model, full);
      if (evaluate(model, a).feasible) {
        if (a.objective_value < incumbent) {
          incumbent = a.objective_value;
          incumbent_x = std::move(full);
        }
        record(std::numeric_limits<double>::infinity());
        continue;
      }
      // Rounding broke a row; branch on the least integral column instead.
      double worst = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double dev = std::abs(x[c] - std::round(x[c]));
        if (dev > worst) {
          worst = dev;
          branch = static_cast<std::int64_t>(c);
        }
      }
      if (branch < 0) {
        record(std::numeric_limits<double>::infinity());
        continue;
      }
    }

    const auto col = static_cast<std::uint32_t>(branch);
    const bool up_first = x[col] >= 0.5;
    for (int side = 0; side < 2; ++side) {
      // The preferred child is pushed last so it is explored first.
      const std::uint8_t value = (side == 0) == up_first ? 0 : 1;
      const double cb = std::max(bound, child_bound[value]);
      if (cb >= cutoff()) continue;
      Node child{node.fixes, cb, node.depth + 1, next_id++};
      child.fixes.push_back({col, value});
      child.branch_col = col;
      child.branch_dir = value;
      child.branch_frac = value == 0 ? x[col] : 1.0 - x[col];
      child.parent_lp = bound;
      push(std::move(child));
    }
    record(bound);
  }

  if (limit_hit) {
    result.status = SolveStatus::LimitReached;
    limit_bound = global_bound(std::numeric_limits<double>::infinity());
    result.dual_bound = report_bound(limit_bound);
  } else if (std::isfinite(incumbent)) {
    result.status = SolveStatus::Optimal;
    result.dual_bound = incumbent;
  } else {
    result.status = SolveStatus::Infeasible;
    result.dual_bound = std::numeric_limits<double>::infinity();
  }
  if (std::isfinite(incumbent)) {
    result.objective = incumbent;
    result.assignment = make_assignment(model, std::move(incumbent_x));
  }
  result.lp_iterations = engine.stats().iterations;
  result.wall_ms = elapsed_ms(start);
  return result;
}

}  // namespace rplan
