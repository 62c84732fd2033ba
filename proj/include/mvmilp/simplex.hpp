#pragma once

#include <cstdint>
#include <memory>

#include "mvmilp/model.hpp"

namespace mvmilp {

struct LpOptions {
  double feas_tol = 1e-7;           // primal feasibility inside the solver
  double opt_tol = 1e-9;            // reduced-cost threshold
  std::int64_t max_iterations = 0;  // 0: scale with problem size
};

enum class LpOutcome { Optimal, Infeasible, Unbounded, IterationLimit };

// Bounded-variable primal simplex over a fixed model, maintained as a dense
// tableau B^-1 [A | I | b]. Variable bounds may be changed between solves;
// the basis persists, so re-solves after single bound changes (the
// branch-and-bound pattern) are cheap. Binary variables are treated as
// continuous within their current bounds.
//
// Phase 1 minimizes the total bound violation of the basic variables with
// dynamically assigned +-1 costs; phase 2 prices with Dantzig's rule and
// falls back to Bland's rule when a degeneracy counter trips.
class SimplexWorkspace {
 public:
  explicit SimplexWorkspace(const MilpModel& model, LpOptions opts = {});
  ~SimplexWorkspace();
  SimplexWorkspace(const SimplexWorkspace&) = delete;
  SimplexWorkspace& operator=(const SimplexWorkspace&) = delete;

  void set_bounds(VarId v, double lower, double upper);
  void reset_bounds();

  LpOutcome solve();

  // Valid after solve() returned Optimal.
  double objective() const;
  std::vector<double> variable_values() const;

  std::int64_t last_iterations() const;
  std::int64_t total_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot LP relaxation solve (binaries relaxed to their [0, 1] boxes).
Solution solve_lp(const MilpModel& model, const LpOptions& opts = {});

}  // namespace mvmilp
