#pragma once

#include "mvmilp/model.hpp"
#include "mvmilp/simplex.hpp"

namespace mvmilp {

struct MilpOptions {
  double time_limit_seconds = kInf;
  double abs_gap = 1e-6;
  double integrality_tol = 1e-6;
  LpOptions lp;
};

// Branch-and-bound over the binary variables: most-fractional branching with
// lowest-id tie break, depth-first dives, best-bound backtracking. The search
// is deterministic for a given model and parameters.
Solution solve_milp(const MilpModel& model, const MilpOptions& opts = {});

// Enumerates every assignment of the binaries (at most 20) and solves the
// induced LP; exact up to LP tolerances. Testing oracle for solve_milp.
Solution brute_force_solve(const MilpModel& model, const LpOptions& lp = {});

}  // namespace mvmilp
