#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvmilp/branch_bound.hpp"
#include "mvmilp/dynamics.hpp"
#include "mvmilp/model.hpp"

namespace mvmilp::avoid {

// Circular obstacle approximated by a regular polygon of `sides` faces in the
// MILP. The center trajectory is a sampled sequence, held or linearly
// interpolated; a single sample is a static obstacle.
struct Obstacle {
  enum class Interp { Hold, Linear };

  double radius = 0.0;
  int sides = 3;
  Interp interp = Interp::Linear;
  std::vector<std::array<double, 3>> center_samples;  // (t, x, y), ascending t

  static Obstacle static_circle(double x, double y, double radius, int sides);
  std::array<double, 2> center_at(double t) const;
  void validate() const;
};

// Sorted, strictly increasing times at which avoidance is enforced.
class AvoidanceTimes {
 public:
  AvoidanceTimes() = default;
  explicit AvoidanceTimes(std::vector<double> times);
  // False when a time within tol of an existing one is rejected.
  bool add(double t, double tol = 1e-9);
  const std::vector<double>& times() const { return times_; }
  size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
};

struct CollisionInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
  int obstacle = 0;
};

struct AvoidanceEmission {
  std::vector<VarId> indicators;  // b_m, one per polygon face
};

// Big-M exclusion of the obstacle polygon at one time: per face m
//   (x - cx) sin(2 pi m/M) + (y - cy) cos(2 pi m/M) >= R - H b_m
// plus sum b_m <= M - 1 so at least one face stays active. radius_scale
// inflates the polygon (the MILP-side safety margin); the true circle is
// always checked separately. big_m <= 0 derives the smallest valid H per
// face from the variable boxes.
AvoidanceEmission add_avoidance_constraints(MilpModel& model,
                                            const AffineExpr& x,
                                            const AffineExpr& y,
                                            const Obstacle& obstacle, double t,
                                            double big_m,
                                            double radius_scale = 1.0,
                                            const std::string& tag = {});

// Dense sampling of the trajectory against the true circles; adjacent
// colliding samples merge into intervals with bisection-refined endpoints.
std::vector<CollisionInterval> collision_intervals(
    const dyn::Trajectory& traj, std::span<const Obstacle> obstacles,
    int samples = 1000, int bisection_steps = 10);

// Smallest signed clearance min(dist to center - radius) over dense samples;
// >= 0 means collision-free at the sampling resolution.
double min_clearance(const dyn::Trajectory& traj,
                     std::span<const Obstacle> obstacles, int samples = 1000);

// Minimum-effort point-to-point transfer with obstacles.
struct TrajectoryProblem {
  dyn::VehicleState start;
  dyn::VehicleState finish;
  std::vector<double> grid_steps;  // control grid durations
  int control_sides = 20;          // M_u
  std::vector<Obstacle> obstacles;
  double big_m = 0.0;  // <= 0: derived from the problem geometry
  int samples = 1000;

  dyn::TimeGrid grid() const { return dyn::TimeGrid(grid_steps); }
  double derived_big_m() const;
};

struct TrajectoryMilp {
  MilpModel model;
  std::vector<std::pair<VarId, VarId>> control_ids;
  std::vector<std::pair<VarId, VarId>> slack_ids;
};

TrajectoryMilp build_trajectory_milp(const TrajectoryProblem& problem,
                                     const AvoidanceTimes& times,
                                     double inflation);

struct RefineIteration {
  int avoidance_times = 0;
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  std::vector<CollisionInterval> collisions;
};

struct RefineResult {
  Solution solution;
  std::optional<dyn::Trajectory> trajectory;
  AvoidanceTimes times;
  std::vector<RefineIteration> log;  // one entry per MILP solve
  bool collision_free = false;
  int refinements() const { return static_cast<int>(log.size()) - 1; }
};

// Iterative avoidance-time refinement: solve with polygons inflated by
// `inflation`, check the true circles, add the midpoint of each collision
// interval, re-solve; stops when collision-free or after max_refinements
// rounds of added times.
RefineResult refine_avoidance_times(const TrajectoryProblem& problem,
                                    AvoidanceTimes initial,
                                    int max_refinements = 10,
                                    double inflation = 0.05,
                                    const MilpOptions& solve_opts = {});

}  // namespace mvmilp::avoid
