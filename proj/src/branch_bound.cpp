#include "mvmilp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace mvmilp {
namespace {

constexpr int kStrongCandidates = 8;

struct Node {
  double bound = -kInf;
  std::int64_t seq = 0;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0, 1
};

// Best bound first; ties resolved newest-first so that backtracking resumes
// at the deepest open node (depth-first among equal bounds).
struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;
  }
};

}  // namespace

Solution solve_milp(const MilpModel& model, const MilpOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  const std::vector<VarId> binaries = model.binary_ids();
  const int nb = static_cast<int>(binaries.size());
  SimplexWorkspace ws(model, opts.lp);

  // Objectives that are integer combinations of binaries admit rounded-up
  // node bounds.
  const bool integral_objective = [&] {
    const AffineExpr& obj = model.objective();
    if (std::floor(obj.constant()) != obj.constant()) return false;
    for (const auto& [v, c] : obj.terms()) {
      if (model.variable(v).kind != VarKind::Binary) return false;
      if (std::floor(c) != c) return false;
    }
    return true;
  }();
  const auto tighten = [&](double bound) {
    return integral_objective ? std::ceil(bound - 1e-9) : bound;
  };

  Solution result;
  bool have_incumbent = false;
  double inc_obj = kInf;
  std::vector<double> inc_values;
  double weakest_prune = kInf;  // loosest bound discarded by gap pruning
  bool hit_time_limit = false;
  bool numerical_error = false;

  std::priority_queue<Node, std::vector<Node>, NodeWorse> open;
  std::int64_t seq = 0;
  open.push(Node{-kInf, seq++, std::vector<std::int8_t>(nb, -1)});

  const auto apply_fix = [&](const std::vector<std::int8_t>& fix) {
    for (int i = 0; i < nb; ++i) {
      switch (fix[i]) {
        case 0:
          ws.set_bounds(binaries[i], 0.0, 0.0);
          break;
        case 1:
          ws.set_bounds(binaries[i], 1.0, 1.0);
          break;
        default:
          ws.set_bounds(binaries[i], 0.0, 1.0);
          break;
      }
    }
  };

  const auto prunable = [&](double bound) {
    return have_incumbent && bound >= inc_obj - opts.abs_gap;
  };

  while (!open.empty() && !hit_time_limit && !numerical_error) {
    Node cur = open.top();
    open.pop();
    if (prunable(cur.bound)) {
      weakest_prune = std::min(weakest_prune, cur.bound);
      continue;
    }
    std::vector<std::int8_t> fix = std::move(cur.fix);

    // Depth-first dive from this node.
    while (true) {
      if (elapsed() >= opts.time_limit_seconds) {
        hit_time_limit = true;
        break;
      }
      ++result.stats.nodes;
      apply_fix(fix);
      const LpOutcome out = ws.solve();
      if (out == LpOutcome::IterationLimit) {
        numerical_error = true;
        break;
      }
      if (out == LpOutcome::Infeasible) break;
      if (out == LpOutcome::Unbounded) {
        int free_idx = -1;
        for (int i = 0; i < nb; ++i) {
          if (fix[i] < 0) {
            free_idx = i;
            break;
          }
        }
        if (free_idx < 0) {
          // All binaries fixed: genuinely unbounded problem.
          result.status = SolveStatus::Unbounded;
          result.objective = -kInf;
          result.best_bound = -kInf;
          result.stats.lp_iterations = ws.total_iterations();
          result.stats.wall_seconds = elapsed();
          return result;
        }
        Node other;
        other.bound = -kInf;
        other.seq = seq++;
        other.fix = fix;
        other.fix[free_idx] = 1;
        open.push(std::move(other));
        fix[free_idx] = 0;
        continue;
      }

      const double obj = ws.objective();
      const double node_bound = tighten(obj);
      if (prunable(node_bound)) {
        weakest_prune = std::min(weakest_prune, node_bound);
        break;
      }
      const std::vector<double> values = ws.variable_values();

      // Candidate set: the most fractional free binaries, ties by lowest id.
      std::vector<int> cands;
      for (int i = 0; i < nb; ++i) {
        if (fix[i] >= 0) continue;
        const double v = values[static_cast<size_t>(binaries[i])];
        if (std::min(v, 1.0 - v) > opts.integrality_tol) cands.push_back(i);
      }
      if (cands.empty()) {
        // Integral within tolerance.
        if (!have_incumbent || obj < inc_obj) {
          have_incumbent = true;
          inc_obj = obj;
          inc_values = values;
        }
        break;
      }
      if (static_cast<int>(cands.size()) > kStrongCandidates) {
        std::partial_sort(
            cands.begin(), cands.begin() + kStrongCandidates, cands.end(),
            [&](int a, int b) {
              const double va = values[static_cast<size_t>(binaries[a])];
              const double vb = values[static_cast<size_t>(binaries[b])];
              const double fa = std::min(va, 1.0 - va);
              const double fb = std::min(vb, 1.0 - vb);
              if (fa != fb) return fa > fb;
              return a < b;
            });
        cands.resize(kStrongCandidates);
      }

      // Strong branching: score candidates by the bound movement of their
      // children; a candidate with one infeasible side is fixed to the other
      // side in place, shrinking the node without growing the tree.
      int branch_on = -1;
      int dive_side = 0;
      double best_score = -1.0;
      bool node_infeasible = false;
      bool implied = false;
      for (int i : cands) {
        double gain[2] = {0.0, 0.0};
        bool inf[2] = {false, false};
        for (int side = 0; side < 2; ++side) {
          ws.set_bounds(binaries[i], side, side);
          const LpOutcome child = ws.solve();
          if (child == LpOutcome::Infeasible) {
            inf[side] = true;
          } else if (child == LpOutcome::Optimal) {
            gain[side] = std::max(0.0, tighten(ws.objective()) - node_bound);
          }
        }
        ws.set_bounds(binaries[i], 0.0, 1.0);
        if (inf[0] && inf[1]) {
          node_infeasible = true;
          break;
        }
        if (inf[0] || inf[1]) {
          fix[i] = static_cast<std::int8_t>(inf[0] ? 1 : 0);
          implied = true;
          break;
        }
        const double score = (gain[0] + 1e-6) * (gain[1] + 1e-6);
        if (score > best_score) {
          best_score = score;
          branch_on = i;
          dive_side = gain[0] <= gain[1] ? 0 : 1;
        }
      }
      if (node_infeasible) break;
      if (implied) continue;  // re-solve the reduced node

      Node other;
      other.bound = node_bound;
      other.seq = seq++;
      other.fix = fix;
      other.fix[branch_on] = static_cast<std::int8_t>(1 - dive_side);
      open.push(std::move(other));
      fix[branch_on] = static_cast<std::int8_t>(dive_side);
    }
  }

  result.stats.lp_iterations = ws.total_iterations();
  result.stats.wall_seconds = elapsed();

  if (numerical_error) {
    result.status = SolveStatus::Error;
    return result;
  }
  if (hit_time_limit) {
    result.status = SolveStatus::TimeLimit;
    double open_bound = kInf;
    while (!open.empty()) {
      open_bound = std::min(open_bound, open.top().bound);
      open.pop();
    }
    result.best_bound = std::min(open_bound, weakest_prune);
    if (have_incumbent) {
      result.values = std::move(inc_values);
      result.objective = inc_obj;
      result.best_bound = std::min(result.best_bound, inc_obj);
    } else {
      result.objective = kInf;
    }
    return result;
  }
  if (!have_incumbent) {
    result.status = SolveStatus::Infeasible;
    return result;
  }
  result.status = SolveStatus::Optimal;
  result.values = std::move(inc_values);
  result.objective = inc_obj;
  result.best_bound = std::min(inc_obj, weakest_prune);
  return result;
}

Solution brute_force_solve(const MilpModel& model, const LpOptions& lp) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<VarId> binaries = model.binary_ids();
  const int nb = static_cast<int>(binaries.size());
  if (nb > 20) {
    throw std::invalid_argument(
        "brute_force_solve: refusing model with more than 20 binaries (" +
        std::to_string(nb) + ")");
  }
  SimplexWorkspace ws(model, lp);

  Solution result;
  bool found = false;
  const std::uint32_t count = 1u << nb;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < nb; ++i) {
      const double v = (mask >> i) & 1u ? 1.0 : 0.0;
      ws.set_bounds(binaries[i], v, v);
    }
    ++result.stats.nodes;
    const LpOutcome out = ws.solve();
    if (out == LpOutcome::IterationLimit) {
      result.status = SolveStatus::Error;
      result.stats.lp_iterations = ws.total_iterations();
      return result;
    }
    if (out == LpOutcome::Unbounded) {
      result.status = SolveStatus::Unbounded;
      result.objective = -kInf;
      result.best_bound = -kInf;
      result.stats.lp_iterations = ws.total_iterations();
      return result;
    }
    if (out == LpOutcome::Infeasible) continue;
    const double obj = ws.objective();
    if (!found || obj < result.objective - 1e-12) {
      found = true;
      result.objective = obj;
      result.values = ws.variable_values();
    }
  }
  result.stats.lp_iterations = ws.total_iterations();
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!found) {
    result.status = SolveStatus::Infeasible;
  } else {
    result.status = SolveStatus::Optimal;
    result.best_bound = result.objective;
  }
  return result;
}

}  // namespace mvmilp
