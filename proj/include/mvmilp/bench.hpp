#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvmilp/branch_bound.hpp"
#include "mvmilp/drills.hpp"

namespace mvmilp::bench {

// Counter-based uniform draw on [0, 1): splitmix64 finalizers over
// (seed, instance index, FNV-1a of the field tag). Adding fields never
// perturbs existing draws, and replay is bit-identical across platforms.
double uniform_draw(std::uint64_t seed, std::uint64_t index,
                    const std::string& field_tag);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  double field_radius = 15.0;  // R_f
  double zone_radius = 2.0;    // R_dz
  Interval attacker_radius{7.5, 15.0};    // r_a in [R_f/2, R_f]
  Interval attacker_speed{1.0, 1.0};      // v_a
  Interval defender_radius{0.0, 0.0};     // zero: [sqrt2 R_dz, 2 sqrt2 R_dz]
  Interval defender_speed{0.5, 1.0};      // v_d
  bool inbound = true;  // aim attacker velocity at the zone (negated radial)
  int num_defenders = 1;
  int num_attackers = 1;

  // Shape of the generated instances.
  drills::DrillKind kind = drills::DrillKind::Drill1;
  int control_steps = 4;   // N_u
  int attacker_steps = 6;  // N_a
  int avoid_steps = 2;     // N_o
  int zone_sides = 4;      // M_dz
  int intercept_sides = 4;
  int warning_sides = 4;
  int control_sides = 4;  // M_u
  int avoid_sides = 4;    // M_o
  double intercept_radius = 1.0;
  double warning_radius = 0.0;  // 0: 2 * intercept_radius
  double horizon_slack = 1.1;
  double fuel_weight = 0.0;
  double indicator_eps = 1e-4;

  Interval effective_defender_radius() const;
};

// Deterministic random instance from the configured intervals; the attacker
// horizon is auto-sized to pass duration_check with the configured slack.
drills::DrillInstance random_instance(const GeneratorConfig& config,
                                      std::uint64_t index);

struct InstanceRecord {
  std::uint64_t index = 0;
  int attackers = 0;
  double fuel_weight = 0.0;
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double wall_seconds = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  std::string error;
};

struct CellSummary {
  int attackers = 0;
  double fuel_weight = 0.0;
  int total = 0;
  int solved = 0;
  std::vector<double> solve_times;  // sorted, optimal instances only
  double t50 = 0.0;                 // NaN when fewer than half solved

  // Empirical fraction of instances solved within t.
  double fraction_solved_by(double t) const;
};

struct ExpFit {
  double c = 0.0;
  double alpha = 0.0;
  std::vector<double> residuals;  // in log space, per point
};

struct CampaignConfig {
  GeneratorConfig base;
  std::vector<int> attacker_counts{1, 2, 3};
  int instances_per_cell = 20;
  double time_limit_seconds = 60.0;
  double abs_gap = 1e-6;
};

struct CampaignResult {
  std::vector<InstanceRecord> instances;
  std::vector<CellSummary> cells;
  std::optional<ExpFit> fit;  // over (N_A, t50) cells with valid medians
};

// Builds and solves every instance; individual failures are recorded and
// never abort the campaign.
CampaignResult run_campaign(const CampaignConfig& config);

// Least squares of t = c e^(alpha n) on log t; needs >= 2 points, t > 0.
ExpFit fit_exponential(std::span<const std::pair<double, double>> points);

}  // namespace mvmilp::bench
