#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvmilp/avoidance.hpp"
#include "mvmilp/dynamics.hpp"
#include "mvmilp/logic.hpp"
#include "mvmilp/model.hpp"

namespace mvmilp::drills {

enum class DrillKind { Drill1, Drill2 };

// Constant-velocity attacker: starts at (p_s, q_s), moves with (v_p, v_q)
// while in attack mode (reversed while retreating in Drill 2).
struct AttackerSpec {
  double p_s = 0.0, q_s = 0.0;
  double v_p = 0.0, v_q = 0.0;
};

struct DefenderSpec {
  dyn::VehicleState start;
};

struct DrillGeometry {
  double zone_radius = 2.0;  // R_dz
  int zone_sides = 8;        // M_dz
  double intercept_radius = 0.5;  // R_I
  int intercept_sides = 8;        // M_I
  double warning_radius = 0.0;  // R_W; <= 0 defaults to 2 * intercept_radius
  int warning_sides = 8;        // M_w
  double field_radius = 15.0;   // R_f

  double effective_warning_radius() const {
    return warning_radius > 0.0 ? warning_radius : 2.0 * intercept_radius;
  }
};

struct DrillEncoding {
  double big_m = 0.0;          // <= 0: derived from field geometry
  double indicator_eps = 1e-4;
  int control_sides = 8;  // M_u
  int avoid_sides = 8;    // M_o, Defense-Zone avoidance polygon
};

struct DrillInstance {
  DrillKind kind = DrillKind::Drill1;
  std::vector<DefenderSpec> defenders;
  std::vector<AttackerSpec> attackers;
  DrillGeometry geometry;
  std::vector<double> control_steps;   // T_u[k], k = 0..N_u-1
  std::vector<double> attacker_steps;  // T_a[k], k = 0..N_a-1
  std::vector<double> zone_avoidance_times;  // t_o[k], within (0, horizon]
  DrillEncoding encoding;
  double fuel_weight = 0.0;

  dyn::TimeGrid control_grid() const { return dyn::TimeGrid(control_steps); }
  dyn::TimeGrid attacker_grid() const { return dyn::TimeGrid(attacker_steps); }
  double derived_position_bound() const;
  double derived_big_m() const;
};

struct DurationCheck {
  bool ok = false;
  double margin = 0.0;         // horizon minus the binding bound
  int binding_attacker = -1;   // attacker with the largest required time
  std::vector<double> bounds;  // per-attacker required horizon
};

// t_a[N_a] >= sqrt((p_s^2+q_s^2)/(v_p^2+v_q^2)) for every attacker.
DurationCheck duration_check(const DrillInstance& instance);

// Ids of every decision variable, addressable the way the formulation names
// them: indices are [defender i][attacker j][step k][face m] as applicable.
// Step arrays run k = 0..N_a with slot 0 holding the build-time constant
// (initial positions are data, so step-0 indicators are fixed).
struct DrillDirectory {
  std::vector<std::vector<std::pair<VarId, VarId>>> control;  // [i][k]
  std::vector<std::vector<std::pair<VarId, VarId>>> effort_slack;
  std::vector<std::vector<VarId>> p, q;        // [j][k], k=0..N_a
  std::vector<std::vector<VarId>> attack;      // a / a_1, [j][k], k>=1
  std::vector<std::vector<VarId>> retreat;     // a_2 (Drill 2), [j][k], k>=1
  std::vector<std::vector<VarId>> zone;        // gamma [j][k], k>=1
  std::vector<std::vector<std::vector<VarId>>> zone_face;  // g [j][k][m]
  std::vector<std::vector<std::vector<VarId>>> intercept;  // delta [i][j][k]
  std::vector<std::vector<std::vector<std::vector<VarId>>>> intercept_face;
  std::vector<std::vector<VarId>> intercept_any;  // OR over defenders [j][k]
  std::vector<std::vector<std::vector<VarId>>> warning;    // omega [i][j][k]
  std::vector<std::vector<std::vector<std::vector<VarId>>>> warning_face;
  std::vector<std::vector<VarId>> warning_any;
  std::vector<std::vector<std::pair<VarId, VarId>>> defender_at_attacker_time;
  std::vector<std::vector<VarId>> avoid_face;  // b [i][per time*face]
  std::map<std::string, VarId> by_name;

  // Step-0 indicator constants computed from the initial geometry.
  std::vector<int> zone0, intercept_any0, warning_any0;
  std::vector<int> attack1, retreat1;  // pinned step-1 modes
};

struct DrillMilp {
  MilpModel model;
  DrillDirectory dir;
};

// Assembles defender dynamics, attacker kinematics, indicator encodings,
// state machines, Defense-Zone avoidance, and the team objective.
DrillMilp build_drill_milp(const DrillInstance& instance,
                           bool skip_duration_check = false);

struct DrillSolution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  SolveStats stats;
  std::vector<std::vector<dyn::Control>> controls;  // [i][k]
  std::vector<dyn::Trajectory> trajectories;        // per defender
  // Per attacker, k = 0..N_a:
  std::vector<std::vector<double>> p, q;
  std::vector<std::vector<int>> attack, retreat;
  std::vector<std::vector<int>> zone;
  std::vector<std::vector<std::vector<int>>> intercept;  // [i][j][k]
  std::vector<std::vector<int>> intercept_any;
  std::vector<std::vector<std::vector<int>>> warning;
  std::vector<std::vector<int>> warning_any;
  double zone_entries = 0.0;  // sum over attackers and steps k>=1
};

DrillSolution extract_solution(const DrillInstance& instance,
                               const DrillMilp& milp, const Solution& sol);

// Signed margin of the binding polygon face, max_m(lhs_m - inradius): <= 0
// inside the closed polygon. Margins within the indicator eps of zero are the
// encoding's documented deadband.
double zone_margin(double px, double py, const DrillGeometry& g);
double intercept_margin(double px, double py, double def_x, double def_y,
                        const DrillGeometry& g);
double warning_margin(double def_x, double def_y, double att_p, double att_q,
                      const DrillGeometry& g);

// Closed polygon membership tests used both at build time (step-0 constants)
// and by the simulator.
bool in_zone_polygon(double px, double py, const DrillGeometry& g);
bool in_intercept_polygon(double px, double py, double def_x, double def_y,
                          const DrillGeometry& g);
bool in_warning_polygon(double def_x, double def_y, double att_p, double att_q,
                        const DrillGeometry& g);

// Vertices of the inradius-R polygon with face normals (sin, cos) at angles
// 2 pi m / M, for plotting.
std::vector<std::array<double, 2>> polygon_vertices(double inradius, int sides,
                                                    double cx = 0.0,
                                                    double cy = 0.0);

}  // namespace mvmilp::drills
