#include "mvmilp/avoidance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mvmilp/kernels.hpp"

namespace mvmilp::avoid {

Obstacle Obstacle::static_circle(double x, double y, double radius, int sides) {
  Obstacle o;
  o.radius = radius;
  o.sides = sides;
  o.interp = Interp::Hold;
  o.center_samples = {{0.0, x, y}};
  o.validate();
  return o;
}

void Obstacle::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("obstacle radius must be > 0");
  if (sides < 3) throw std::invalid_argument("obstacle needs >= 3 sides");
  if (center_samples.empty()) {
    throw std::invalid_argument("obstacle has no center samples");
  }
  for (size_t i = 1; i < center_samples.size(); ++i) {
    if (center_samples[i][0] <= center_samples[i - 1][0]) {
      throw std::invalid_argument("obstacle center samples must be ascending");
    }
  }
}

std::array<double, 2> Obstacle::center_at(double t) const {
  const auto& s = center_samples;
  if (t <= s.front()[0] || s.size() == 1) return {s.front()[1], s.front()[2]};
  if (t >= s.back()[0]) return {s.back()[1], s.back()[2]};
  size_t hi = 1;
  while (s[hi][0] < t) ++hi;
  if (interp == Interp::Hold) return {s[hi - 1][1], s[hi - 1][2]};
  const double w = (t - s[hi - 1][0]) / (s[hi][0] - s[hi - 1][0]);
  return {s[hi - 1][1] + w * (s[hi][1] - s[hi - 1][1]),
          s[hi - 1][2] + w * (s[hi][2] - s[hi - 1][2])};
}

AvoidanceTimes::AvoidanceTimes(std::vector<double> times)
    : times_(std::move(times)) {
  std::sort(times_.begin(), times_.end());
  for (size_t i = 1; i < times_.size(); ++i) {
    if (times_[i] - times_[i - 1] < 1e-12) {
      throw std::invalid_argument("avoidance times must be strictly increasing");
    }
  }
}

bool AvoidanceTimes::add(double t, double tol) {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it != times_.end() && std::abs(*it - t) <= tol) return false;
  if (it != times_.begin() && std::abs(*(it - 1) - t) <= tol) return false;
  times_.insert(it, t);
  return true;
}

AvoidanceEmission add_avoidance_constraints(MilpModel& model,
                                            const AffineExpr& x,
                                            const AffineExpr& y,
                                            const Obstacle& obstacle, double t,
                                            double big_m, double radius_scale,
                                            const std::string& tag) {
  obstacle.validate();
  const auto [cx, cy] = obstacle.center_at(t);
  const double r = obstacle.radius * radius_scale;
  const int sides = obstacle.sides;

  AvoidanceEmission out;
  out.indicators.reserve(static_cast<size_t>(sides));
  AffineExpr cardinality;
  for (int m = 1; m <= sides; ++m) {
    const VarId b = model.add_binary(tag + "_b" + std::to_string(m));
    out.indicators.push_back(b);
    const double sn = std::sin(2.0 * std::numbers::pi * m / sides);
    const double cs = std::cos(2.0 * std::numbers::pi * m / sides);
    // (x-cx) sn + (y-cy) cs >= r - H b
    AffineExpr lhs = sn * x + cs * y;
    const double rhs = r + sn * cx + cs * cy;
    double h = big_m;
    if (h <= 0.0) {
      // Smallest H that deactivates the face over the variable boxes.
      h = std::max(rhs - expr_bounds(lhs, model).first, 1.0) + 1.0;
    }
    lhs.add_term(b, h);
    model.add_constraint(std::move(lhs), Sense::GreaterEq, rhs);
    cardinality.add_term(b, 1.0);
  }
  model.add_constraint(std::move(cardinality), Sense::LessEq,
                       static_cast<double>(sides - 1));
  return out;
}

namespace {

bool inside_circle(const dyn::Trajectory& traj, const Obstacle& o, double t) {
  const dyn::VehicleState s = traj.at(t);
  const auto [cx, cy] = o.center_at(t);
  const double dx = s.x - cx;
  const double dy = s.y - cy;
  return dx * dx + dy * dy < o.radius * o.radius;
}

// Bisection between an outside time and an inside time.
double refine_boundary(const dyn::Trajectory& traj, const Obstacle& o,
                       double t_out, double t_in, int steps) {
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (t_out + t_in);
    if (inside_circle(traj, o, mid)) {
      t_in = mid;
    } else {
      t_out = mid;
    }
  }
  return 0.5 * (t_out + t_in);
}

}  // namespace

std::vector<CollisionInterval> collision_intervals(
    const dyn::Trajectory& traj, std::span<const Obstacle> obstacles,
    int samples, int bisection_steps) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const double tf = traj.horizon();
  std::vector<CollisionInterval> out;
  for (int oi = 0; oi < static_cast<int>(obstacles.size()); ++oi) {
    const Obstacle& o = obstacles[oi];
    bool prev_inside = inside_circle(traj, o, 0.0);
    double prev_t = 0.0;
    double begin = prev_inside ? 0.0 : -1.0;
    for (int i = 1; i <= samples; ++i) {
      const double t = tf * i / samples;
      const bool inside = inside_circle(traj, o, t);
      if (inside && !prev_inside) {
        begin = refine_boundary(traj, o, prev_t, t, bisection_steps);
      } else if (!inside && prev_inside) {
        const double end = refine_boundary(traj, o, t, prev_t, bisection_steps);
        out.push_back({begin, end, oi});
        begin = -1.0;
      }
      prev_inside = inside;
      prev_t = t;
    }
    if (prev_inside && begin >= 0.0) out.push_back({begin, tf, oi});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.t_begin < b.t_begin;
  });
  return out;
}

double min_clearance(const dyn::Trajectory& traj,
                     std::span<const Obstacle> obstacles, int samples) {
  if (obstacles.empty()) return kInf;
  std::vector<double> xs(static_cast<size_t>(samples) + 1);
  std::vector<double> ys(static_cast<size_t>(samples) + 1);
  const double tf = traj.horizon();
  for (int i = 0; i <= samples; ++i) {
    const dyn::VehicleState s = traj.at(tf * i / samples);
    xs[static_cast<size_t>(i)] = s.x;
    ys[static_cast<size_t>(i)] = s.y;
  }
  double worst = kInf;
  for (const Obstacle& o : obstacles) {
    double d2;
    if (o.center_samples.size() == 1) {
      d2 = kernels::min_dist2(xs.data(), ys.data(), o.center_samples[0][1],
                              o.center_samples[0][2], xs.size());
    } else {
      d2 = kInf;
      for (int i = 0; i <= samples; ++i) {
        const auto [cx, cy] = o.center_at(tf * i / samples);
        const double dx = xs[static_cast<size_t>(i)] - cx;
        const double dy = ys[static_cast<size_t>(i)] - cy;
        d2 = std::min(d2, dx * dx + dy * dy);
      }
    }
    worst = std::min(worst, std::sqrt(d2) - o.radius);
  }
  return worst;
}

double TrajectoryProblem::derived_big_m() const {
  // Operating-box rule: larger than the field extent plus the obstacle
  // radius. The reachable extent is bounded by the start, the finish, and
  // the horizon at the capped speed.
  double extent = std::max({std::abs(start.x), std::abs(start.y),
                            std::abs(finish.x), std::abs(finish.y), 1.0});
  double max_r = 0.0;
  for (const Obstacle& o : obstacles) {
    for (const auto& s : o.center_samples) {
      extent = std::max(
          {extent, std::abs(s[1]) + o.radius, std::abs(s[2]) + o.radius});
    }
    max_r = std::max(max_r, o.radius);
  }
  const double speed = std::max({1.0, std::abs(start.vx), std::abs(start.vy)});
  double tf = 0.0;
  for (double dt : grid_steps) tf += dt;
  return 2.0 * (extent + speed * tf) + max_r + 1.0;
}

TrajectoryMilp build_trajectory_milp(const TrajectoryProblem& problem,
                                     const AvoidanceTimes& times,
                                     double inflation) {
  TrajectoryMilp out;
  MilpModel& model = out.model;
  const dyn::TimeGrid grid = problem.grid();
  const int n = grid.num_steps();

  for (int k = 0; k < n; ++k) {
    const VarId ux = model.add_continuous(-1.0, 1.0, "ux" + std::to_string(k));
    const VarId uy = model.add_continuous(-1.0, 1.0, "uy" + std::to_string(k));
    out.control_ids.push_back({ux, uy});
  }
  model.add_constraints(
      dyn::control_polygon_constraints(out.control_ids, problem.control_sides));

  dyn::EffortObjective effort =
      dyn::add_min_effort_objective(model, out.control_ids);
  out.slack_ids = effort.slack_ids;
  model.set_objective(effort.objective);

  // Terminal boundary condition on all four state components.
  dyn::SymbolicTrajectory sym(problem.start, out.control_ids, grid);
  const dyn::StateExpr& fin = sym.node(n);
  model.add_constraint(fin.x, Sense::Equal, problem.finish.x);
  model.add_constraint(fin.y, Sense::Equal, problem.finish.y);
  model.add_constraint(fin.vx, Sense::Equal, problem.finish.vx);
  model.add_constraint(fin.vy, Sense::Equal, problem.finish.vy);

  const double big_m =
      problem.big_m > 0.0 ? problem.big_m : problem.derived_big_m();
  int ti = 0;
  for (double t : times.times()) {
    const auto [px, py] = sym.position(t);
    for (size_t oi = 0; oi < problem.obstacles.size(); ++oi) {
      add_avoidance_constraints(model, px, py, problem.obstacles[oi], t,
                                big_m, 1.0 + inflation,
                                "o" + std::to_string(oi) + "t" +
                                    std::to_string(ti));
    }
    ++ti;
  }
  return out;
}

RefineResult refine_avoidance_times(const TrajectoryProblem& problem,
                                    AvoidanceTimes initial, int max_refinements,
                                    double inflation,
                                    const MilpOptions& solve_opts) {
  RefineResult result;
  result.times = std::move(initial);
  const dyn::DiscreteDynamics dynamics{problem.grid()};

  for (int round = 0; round <= max_refinements; ++round) {
    TrajectoryMilp milp = build_trajectory_milp(problem, result.times, inflation);
    Solution sol = solve_milp(milp.model, solve_opts);
    RefineIteration entry;
    entry.avoidance_times = static_cast<int>(result.times.size());
    entry.status = sol.status;
    entry.objective = sol.objective;
    if (sol.status != SolveStatus::Optimal) {
      result.log.push_back(std::move(entry));
      result.solution = std::move(sol);
      return result;
    }
    std::vector<dyn::Control> controls;
    controls.reserve(milp.control_ids.size());
    for (const auto& [ux, uy] : milp.control_ids) {
      controls.push_back({sol.values[static_cast<size_t>(ux)],
                          sol.values[static_cast<size_t>(uy)]});
    }
    dyn::Trajectory traj(dynamics, problem.start, std::move(controls));
    entry.collisions =
        collision_intervals(traj, problem.obstacles, problem.samples);
    const bool free = entry.collisions.empty();
    result.log.push_back(entry);
    result.solution = std::move(sol);
    result.trajectory = std::move(traj);
    if (free) {
      result.collision_free = true;
      return result;
    }
    bool grew = false;
    for (const CollisionInterval& ci : entry.collisions) {
      if (result.times.add(0.5 * (ci.t_begin + ci.t_end))) grew = true;
    }
    if (!grew) break;  // cannot refine further at this resolution
  }
  return result;
}

}  // namespace mvmilp::avoid
