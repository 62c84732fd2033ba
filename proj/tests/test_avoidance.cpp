#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mvmilp/avoidance.hpp"
#include "mvmilp/branch_bound.hpp"

using namespace mvmilp;
using namespace mvmilp::avoid;

namespace {

// A constant-velocity horizontal trajectory: vx0 = 1 with u_x = 1 keeps
// xdot(t) = 1 exactly, so positions move linearly in time.
dyn::Trajectory unit_speed_line(double x0, double y0, double horizon, int steps) {
  const dyn::DiscreteDynamics d{dyn::TimeGrid::uniform(horizon / steps, steps)};
  std::vector<dyn::Control> u(static_cast<size_t>(steps), {1.0, 0.0});
  return dyn::Trajectory(d, {x0, y0, 1.0, 0.0}, std::move(u));
}

bool rows_feasible(std::span<const Constraint> rows,
                   std::span<const double> values) {
  for (const Constraint& c : rows) {
    if (c.violation(values) > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("avoidance rows: center point is infeasible for every binary choice") {
  MilpModel m;
  const Obstacle o = Obstacle::static_circle(0.0, 0.0, 0.5, 6);
  add_avoidance_constraints(m, AffineExpr(0.0), AffineExpr(0.0), o, 0.0, 100.0);
  // All 6 binaries free: brute force over them proves infeasibility.
  m.set_objective(AffineExpr::variable(0));
  CHECK(brute_force_solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("avoidance rows: point off face 1 is feasible with b_1 = 0") {
  MilpModel m;
  const int sides = 8;
  const Obstacle o = Obstacle::static_circle(0.0, 0.0, 0.5, sides);
  // Face 1 normal is (sin, cos) at angle 2 pi / 8.
  const double ang = 2.0 * std::numbers::pi / sides;
  const double px = 2.0 * 0.5 * std::sin(ang);
  const double py = 2.0 * 0.5 * std::cos(ang);
  add_avoidance_constraints(m, AffineExpr(px), AffineExpr(py), o, 0.0, 100.0);
  std::vector<double> v(static_cast<size_t>(m.num_variables()), 1.0);
  v[0] = 0.0;  // b_1 active, all others disabled
  CHECK(rows_feasible(m.constraints(), v));
  // Sum b_m = M violates the cardinality row regardless of geometry.
  std::fill(v.begin(), v.end(), 1.0);
  CHECK_FALSE(rows_feasible(m.constraints(), v));
}

TEST_CASE("collision intervals: far trajectory reports none") {
  const dyn::Trajectory traj = unit_speed_line(-1.0, 0.0, 2.0, 4);
  const std::vector<Obstacle> obs{Obstacle::static_circle(0.0, 5.0, 0.3, 8)};
  CHECK(collision_intervals(traj, obs).empty());
  CHECK(min_clearance(traj, obs) > 4.0);
}

TEST_CASE("collision intervals: straight pass matches the chord time") {
  // Unit-speed line from x = -1 through a circle of radius 0.1 at the origin:
  // inside for t in (0.9, 1.1), chord traversal time 0.2.
  const dyn::Trajectory traj = unit_speed_line(-1.0, 0.0, 2.0, 4);
  const std::vector<Obstacle> obs{Obstacle::static_circle(0.0, 0.0, 0.1, 8)};
  const auto intervals = collision_intervals(traj, obs, 1000);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].t_begin == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(intervals[0].t_end == doctest::Approx(1.1).epsilon(1e-3));
  CHECK(intervals[0].obstacle == 0);
  CHECK(min_clearance(traj, obs) < 0.0);
}

TEST_CASE("moving obstacle centers interpolate linearly") {
  Obstacle o;
  o.radius = 0.2;
  o.sides = 6;
  o.interp = Obstacle::Interp::Linear;
  o.center_samples = {{0.0, 0.0, 0.0}, {1.0, 2.0, -2.0}};
  const auto mid = o.center_at(0.5);
  CHECK(mid[0] == doctest::Approx(1.0));
  CHECK(mid[1] == doctest::Approx(-1.0));
  o.interp = Obstacle::Interp::Hold;
  CHECK(o.center_at(0.5)[0] == doctest::Approx(0.0));
  CHECK(o.center_at(1.5)[0] == doctest::Approx(2.0));
}

TEST_CASE("avoidance time sets stay sorted and reject duplicates") {
  AvoidanceTimes times(std::vector<double>{0.5, 0.2});
  CHECK(times.times().front() == doctest::Approx(0.2));
  CHECK(times.add(0.35));
  CHECK_FALSE(times.add(0.35 + 1e-12));
  CHECK(times.size() == 3);
}

TEST_CASE("refinement: obstacle-free problem exits without iterations") {
  TrajectoryProblem prob;
  prob.start = {-0.25, -0.2, -0.5, -0.2};
  prob.finish = {0.4, 0.3, 0.0, 0.0};
  prob.grid_steps.assign(10, 0.3);
  prob.control_sides = 20;
  const RefineResult res = refine_avoidance_times(prob, AvoidanceTimes{}, 10);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  CHECK(res.collision_free);
  CHECK(res.refinements() == 0);
  CHECK(res.log.size() == 1);
}

TEST_CASE("refinement clears an obstacle sitting on the straight path") {
  TrajectoryProblem prob;
  prob.start = {-0.25, -0.2, -0.5, -0.2};
  prob.finish = {0.4, 0.3, 0.0, 0.0};
  prob.grid_steps.assign(10, 0.3);
  prob.control_sides = 20;
  prob.obstacles.push_back(Obstacle::static_circle(0.05, 0.05, 0.12, 10));

  const RefineResult res = refine_avoidance_times(prob, AvoidanceTimes{}, 10);
  REQUIRE(res.solution.status == SolveStatus::Optimal);
  CHECK(res.collision_free);
  CHECK(res.refinements() >= 1);
  REQUIRE(res.trajectory.has_value());
  CHECK(min_clearance(*res.trajectory, prob.obstacles, 1000) >= -1e-6);
  // Each added time lies inside a collision interval recorded earlier, and
  // the time set grows monotonically.
  CHECK(res.times.size() >= res.log.front().collisions.size());
  // Bookkeeping: one log entry per MILP solve.
  CHECK(static_cast<int>(res.log.size()) == res.refinements() + 1);
}

TEST_CASE("soundness: enforced avoidance times hold in the solved model") {
  TrajectoryProblem prob;
  prob.start = {-0.25, -0.2, -0.5, -0.2};
  prob.finish = {0.4, 0.3, 0.0, 0.0};
  prob.grid_steps.assign(10, 0.3);
  prob.control_sides = 20;
  prob.obstacles.push_back(Obstacle::static_circle(0.05, 0.05, 0.12, 10));
  AvoidanceTimes times;
  for (int k = 1; k <= 10; ++k) times.add(0.3 * k);

  TrajectoryMilp milp = build_trajectory_milp(prob, times, 0.05);
  const Solution sol = solve_milp(milp.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  std::vector<dyn::Control> u;
  for (const auto& [ux, uy] : milp.control_ids) {
    u.push_back({sol.values[static_cast<size_t>(ux)],
                 sol.values[static_cast<size_t>(uy)]});
  }
  const dyn::Trajectory traj(dyn::DiscreteDynamics{prob.grid()}, prob.start, u);
  // At every enforced time the point lies outside the inflated polygon:
  // at least one face margin is nonnegative.
  for (double t : times.times()) {
    const dyn::VehicleState s = traj.at(t);
    const auto [cx, cy] = prob.obstacles[0].center_at(t);
    double best = -kInf;
    for (int m = 1; m <= 10; ++m) {
      const double ang = 2.0 * std::numbers::pi * m / 10;
      best = std::max(best, (s.x - cx) * std::sin(ang) +
                                (s.y - cy) * std::cos(ang));
    }
    CHECK(best >= 0.12 * 1.05 - 1e-6);
  }
}
