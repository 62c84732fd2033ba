#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "mvmilp/model.hpp"

namespace mvmilp::dyn {

// Nonuniform discretization: durations T[k] > 0, node times t[0]=0 .. t[N].
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> steps);
  static TimeGrid uniform(double step, int count);

  int num_steps() const { return static_cast<int>(steps_.size()); }
  double step(int k) const { return steps_[static_cast<size_t>(k)]; }
  double node_time(int k) const { return nodes_[static_cast<size_t>(k)]; }
  double horizon() const { return nodes_.back(); }
  const std::vector<double>& steps() const { return steps_; }

  // Left-closed lookup: the unique k with t[k] <= t <= t[k+1], binding
  // interior nodes to the step they start; t == horizon maps to the final
  // step. Throws outside [0, horizon].
  int step_index(double t) const;

 private:
  std::vector<double> steps_;
  std::vector<double> nodes_;
};

struct VehicleState {
  double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
};

// Closed-form coefficients of one step of the damped double integrator
// xdd + xd = u: decay = e^-T, vel_gain = 1 - e^-T, pos_gain = T - 1 + e^-T.
struct StepCoeffs {
  double dt;
  double decay;
  double vel_gain;
  double pos_gain;
};

class DiscreteDynamics {
 public:
  explicit DiscreteDynamics(TimeGrid grid);
  const TimeGrid& grid() const { return grid_; }
  const StepCoeffs& coeffs(int k) const { return coeffs_[static_cast<size_t>(k)]; }
  std::array<std::array<double, 4>, 4> state_matrix(int k) const;  // A[k]
  std::array<std::array<double, 2>, 4> input_matrix(int k) const;  // B[k]

 private:
  TimeGrid grid_;
  std::vector<StepCoeffs> coeffs_;
};

using Control = std::array<double, 2>;  // (u_x, u_y)

// Iterates x[k+1] = A[k] x[k] + B[k] u[k]; returns N+1 states including the
// start.
std::vector<VehicleState> propagate(const VehicleState& start,
                                    std::span<const Control> controls,
                                    const DiscreteDynamics& dynamics);

// State at elapsed time tau in [0, dt] into a step with held input u.
VehicleState intersample_state(const VehicleState& node_state, const Control& u,
                               double tau, double dt);

// A solved trajectory: start state plus held controls; query any time.
class Trajectory {
 public:
  Trajectory(DiscreteDynamics dynamics, VehicleState start,
             std::vector<Control> controls);
  const std::vector<VehicleState>& node_states() const { return nodes_; }
  const std::vector<Control>& controls() const { return controls_; }
  const DiscreteDynamics& dynamics() const { return dynamics_; }
  const TimeGrid& grid() const { return dynamics_.grid(); }
  double horizon() const { return dynamics_.grid().horizon(); }
  VehicleState at(double t) const;

 private:
  DiscreteDynamics dynamics_;
  std::vector<Control> controls_;
  std::vector<VehicleState> nodes_;
};

struct StateExpr {
  AffineExpr x, y, vx, vy;
};

// The trajectory as affine expressions over the control variables: evaluating
// any node or inter-sample expression at a control assignment reproduces the
// numeric propagation.
class SymbolicTrajectory {
 public:
  SymbolicTrajectory(const VehicleState& start,
                     std::span<const std::pair<VarId, VarId>> control_ids,
                     TimeGrid grid);
  const StateExpr& node(int k) const { return nodes_[static_cast<size_t>(k)]; }
  StateExpr at(double t) const;
  std::pair<AffineExpr, AffineExpr> position(double t) const;
  const TimeGrid& grid() const { return dynamics_.grid(); }

 private:
  DiscreteDynamics dynamics_;
  std::vector<std::pair<VarId, VarId>> control_ids_;
  std::vector<StateExpr> nodes_;
};

// Regular polygon inscribed in the unit disk: per step the `sides` rows
//   u_x sin(2 pi m / M) + u_y cos(2 pi m / M) <= cos(pi / M).
std::vector<Constraint> control_polygon_constraints(
    std::span<const std::pair<VarId, VarId>> control_ids, int sides);

struct EffortObjective {
  std::vector<std::pair<VarId, VarId>> slack_ids;  // (z_x[k], z_y[k])
  AffineExpr objective;                            // sum of slacks
};

// Adds slack variables z >= 0 with -z <= u <= z rows to the model; the
// returned expression is the linearized total control effort.
EffortObjective add_min_effort_objective(
    MilpModel& model, std::span<const std::pair<VarId, VarId>> control_ids,
    const std::string& name_prefix = "z");

}  // namespace mvmilp::dyn
