#pragma once

#include <span>
#include <string>
#include <vector>

#include "mvmilp/drills.hpp"
#include "mvmilp/dynamics.hpp"

namespace mvmilp::sim {

// Geometric forward simulation of one attacker, series indexed k = 0..N_a.
struct AttackerTrace {
  std::vector<double> p, q;
  std::vector<int> attack, retreat;  // modes (retreat all zero in Drill 1)
  std::vector<int> zone, intercept_any, warning_any;
  std::vector<std::vector<int>> intercept;  // [defender][k]
  std::vector<std::vector<int>> warning;
  std::vector<double> zone_margins;  // binding-face margin per step
};

struct SimTrace {
  std::vector<AttackerTrace> attackers;
  std::vector<std::vector<dyn::VehicleState>> defender_states;  // [i][k]
  int score = 0;  // zone entries summed over attackers, steps k >= 1
};

// Replays the attacker state machines against fixed defender controls with
// exact double-precision polygon tests (no big-M artifacts).
SimTrace simulate(const drills::DrillInstance& instance,
                  std::span<const std::vector<dyn::Control>> defender_controls);

struct Divergence {
  int attacker = -1;
  int step = -1;
  std::string field;
  double solver_value = 0.0;
  double sim_value = 0.0;
};

struct ValidationReport {
  bool clean = false;
  std::vector<Divergence> divergences;     // first divergence, if any
  std::vector<std::string> ambiguous;      // boundary-deadband notes
  int sim_score = 0;
  double solver_zone_sum = 0.0;
  double recomputed_objective = 0.0;  // zone sum + fuel_weight * effort
};

// Re-simulates with the solution's controls and compares indicator and mode
// series step by step. Indicators whose geometric margin lies within the
// encoding eps are flagged boundary-ambiguous, adopt the solver's value, and
// do not count as divergence.
ValidationReport validate(const drills::DrillInstance& instance,
                          const drills::DrillSolution& solution);

}  // namespace mvmilp::sim
