#include "mvmilp/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mvmilp::dyn {

TimeGrid::TimeGrid(std::vector<double> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("TimeGrid: no steps");
  nodes_.reserve(steps_.size() + 1);
  nodes_.push_back(0.0);
  for (double dt : steps_) {
    if (!(dt > 0.0)) {
      throw std::invalid_argument("TimeGrid: step durations must be positive");
    }
    nodes_.push_back(nodes_.back() + dt);
  }
}

TimeGrid TimeGrid::uniform(double step, int count) {
  if (count <= 0) throw std::invalid_argument("TimeGrid: count must be > 0");
  return TimeGrid(std::vector<double>(static_cast<size_t>(count), step));
}

int TimeGrid::step_index(double t) const {
  constexpr double tol = 1e-9;
  if (t < -tol || t > horizon() + tol) {
    throw std::out_of_range("time " + std::to_string(t) +
                            " outside grid span [0, " +
                            std::to_string(horizon()) + "]");
  }
  // Largest k with t[k] <= t, clamped to the final step.
  int lo = 0;
  int hi = num_steps() - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (nodes_[static_cast<size_t>(mid)] <= t) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

DiscreteDynamics::DiscreteDynamics(TimeGrid grid) : grid_(std::move(grid)) {
  coeffs_.reserve(static_cast<size_t>(grid_.num_steps()));
  for (int k = 0; k < grid_.num_steps(); ++k) {
    const double dt = grid_.step(k);
    const double decay = std::exp(-dt);
    coeffs_.push_back({dt, decay, 1.0 - decay, dt - 1.0 + decay});
  }
}

std::array<std::array<double, 4>, 4> DiscreteDynamics::state_matrix(
    int k) const {
  const StepCoeffs& c = coeffs(k);
  return {{{1.0, 0.0, c.vel_gain, 0.0},
           {0.0, 1.0, 0.0, c.vel_gain},
           {0.0, 0.0, c.decay, 0.0},
           {0.0, 0.0, 0.0, c.decay}}};
}

std::array<std::array<double, 2>, 4> DiscreteDynamics::input_matrix(
    int k) const {
  const StepCoeffs& c = coeffs(k);
  return {{{c.pos_gain, 0.0},
           {0.0, c.pos_gain},
           {c.vel_gain, 0.0},
           {0.0, c.vel_gain}}};
}

std::vector<VehicleState> propagate(const VehicleState& start,
                                    std::span<const Control> controls,
                                    const DiscreteDynamics& dynamics) {
  const int n = dynamics.grid().num_steps();
  if (static_cast<int>(controls.size()) != n) {
    throw std::invalid_argument("propagate: control count does not match grid");
  }
  std::vector<VehicleState> out;
  out.reserve(static_cast<size_t>(n) + 1);
  out.push_back(start);
  for (int k = 0; k < n; ++k) {
    const StepCoeffs& c = dynamics.coeffs(k);
    const VehicleState& s = out.back();
    const Control& u = controls[static_cast<size_t>(k)];
    out.push_back({s.x + c.vel_gain * s.vx + c.pos_gain * u[0],
                   s.y + c.vel_gain * s.vy + c.pos_gain * u[1],
                   c.decay * s.vx + c.vel_gain * u[0],
                   c.decay * s.vy + c.vel_gain * u[1]});
  }
  return out;
}

VehicleState intersample_state(const VehicleState& s, const Control& u,
                               double tau, double dt) {
  constexpr double tol = 1e-9;
  if (tau < -tol || tau > dt + tol) {
    throw std::out_of_range("intersample_state: time outside the step");
  }
  const double decay = std::exp(-tau);
  const double vg = 1.0 - decay;
  const double pg = tau - 1.0 + decay;
  return {s.x + vg * s.vx + pg * u[0], s.y + vg * s.vy + pg * u[1],
          decay * s.vx + vg * u[0], decay * s.vy + vg * u[1]};
}

Trajectory::Trajectory(DiscreteDynamics dynamics, VehicleState start,
                       std::vector<Control> controls)
    : dynamics_(std::move(dynamics)), controls_(std::move(controls)) {
  nodes_ = propagate(start, controls_, dynamics_);
}

VehicleState Trajectory::at(double t) const {
  const int k = grid().step_index(t);
  return intersample_state(nodes_[static_cast<size_t>(k)],
                           controls_[static_cast<size_t>(k)],
                           t - grid().node_time(k), grid().step(k));
}

SymbolicTrajectory::SymbolicTrajectory(
    const VehicleState& start,
    std::span<const std::pair<VarId, VarId>> control_ids, TimeGrid grid)
    : dynamics_(std::move(grid)),
      control_ids_(control_ids.begin(), control_ids.end()) {
  const int n = dynamics_.grid().num_steps();
  if (static_cast<int>(control_ids_.size()) != n) {
    throw std::invalid_argument(
        "SymbolicTrajectory: control id count does not match grid");
  }
  nodes_.reserve(static_cast<size_t>(n) + 1);
  StateExpr s;
  s.x = AffineExpr(start.x);
  s.y = AffineExpr(start.y);
  s.vx = AffineExpr(start.vx);
  s.vy = AffineExpr(start.vy);
  nodes_.push_back(s);
  for (int k = 0; k < n; ++k) {
    const StepCoeffs& c = dynamics_.coeffs(k);
    const auto [ux, uy] = control_ids_[static_cast<size_t>(k)];
    StateExpr next;
    next.x = s.x + c.vel_gain * s.vx + AffineExpr::variable(ux, c.pos_gain);
    next.y = s.y + c.vel_gain * s.vy + AffineExpr::variable(uy, c.pos_gain);
    next.vx = c.decay * s.vx + AffineExpr::variable(ux, c.vel_gain);
    next.vy = c.decay * s.vy + AffineExpr::variable(uy, c.vel_gain);
    nodes_.push_back(next);
    s = std::move(next);
  }
}

StateExpr SymbolicTrajectory::at(double t) const {
  const TimeGrid& g = dynamics_.grid();
  const int k = g.step_index(t);
  const double tau = t - g.node_time(k);
  const double decay = std::exp(-tau);
  const double vg = 1.0 - decay;
  const double pg = tau - 1.0 + decay;
  const StateExpr& s = nodes_[static_cast<size_t>(k)];
  const auto [ux, uy] = control_ids_[static_cast<size_t>(k)];
  StateExpr out;
  out.x = s.x + vg * s.vx + AffineExpr::variable(ux, pg);
  out.y = s.y + vg * s.vy + AffineExpr::variable(uy, pg);
  out.vx = decay * s.vx + AffineExpr::variable(ux, vg);
  out.vy = decay * s.vy + AffineExpr::variable(uy, vg);
  return out;
}

std::pair<AffineExpr, AffineExpr> SymbolicTrajectory::position(double t) const {
  StateExpr s = at(t);
  return {std::move(s.x), std::move(s.y)};
}

std::vector<Constraint> control_polygon_constraints(
    std::span<const std::pair<VarId, VarId>> control_ids, int sides) {
  if (sides < 3) {
    throw std::invalid_argument("control polygon needs at least 3 sides");
  }
  std::vector<Constraint> out;
  out.reserve(control_ids.size() * static_cast<size_t>(sides));
  const double rhs = std::cos(std::numbers::pi / sides);
  for (const auto& [ux, uy] : control_ids) {
    for (int m = 1; m <= sides; ++m) {
      const double ang = 2.0 * std::numbers::pi * m / sides;
      AffineExpr e;
      e.add_term(ux, std::sin(ang));
      e.add_term(uy, std::cos(ang));
      out.emplace_back(std::move(e), Sense::LessEq, rhs);
    }
  }
  return out;
}

EffortObjective add_min_effort_objective(
    MilpModel& model, std::span<const std::pair<VarId, VarId>> control_ids,
    const std::string& name_prefix) {
  EffortObjective out;
  out.slack_ids.reserve(control_ids.size());
  int k = 0;
  for (const auto& [ux, uy] : control_ids) {
    const VarId zx = model.add_continuous(
        0.0, kInf, name_prefix + "x" + std::to_string(k));
    const VarId zy = model.add_continuous(
        0.0, kInf, name_prefix + "y" + std::to_string(k));
    // -z <= u <= z
    model.add_constraint(AffineExpr::variable(ux) - AffineExpr::variable(zx),
                         Sense::LessEq, 0.0);
    model.add_constraint(AffineExpr::variable(ux) + AffineExpr::variable(zx),
                         Sense::GreaterEq, 0.0);
    model.add_constraint(AffineExpr::variable(uy) - AffineExpr::variable(zy),
                         Sense::LessEq, 0.0);
    model.add_constraint(AffineExpr::variable(uy) + AffineExpr::variable(zy),
                         Sense::GreaterEq, 0.0);
    out.objective.add_term(zx, 1.0);
    out.objective.add_term(zy, 1.0);
    out.slack_ids.push_back({zx, zy});
    ++k;
  }
  return out;
}

}  // namespace mvmilp::dyn
