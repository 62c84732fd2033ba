#include "mvmilp/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace mvmilp::sim {
namespace {

std::vector<dyn::Trajectory> defender_trajectories(
    const drills::DrillInstance& inst,
    std::span<const std::vector<dyn::Control>> controls) {
  if (controls.size() != inst.defenders.size()) {
    throw std::invalid_argument("control sets do not match defender count");
  }
  const dyn::DiscreteDynamics dynamics{inst.control_grid()};
  std::vector<dyn::Trajectory> out;
  out.reserve(controls.size());
  for (size_t i = 0; i < controls.size(); ++i) {
    if (static_cast<int>(controls[i].size()) != dynamics.grid().num_steps()) {
      throw std::invalid_argument("control horizon mismatch for defender " +
                                  std::to_string(i + 1));
    }
    out.emplace_back(dynamics, inst.defenders[i].start, controls[i]);
  }
  return out;
}

}  // namespace

SimTrace simulate(const drills::DrillInstance& inst,
                  std::span<const std::vector<dyn::Control>> controls) {
  const bool two = inst.kind == drills::DrillKind::Drill2;
  const int nd = static_cast<int>(inst.defenders.size());
  const int steps = static_cast<int>(inst.attacker_steps.size());
  const drills::DrillGeometry& g = inst.geometry;
  const dyn::TimeGrid agrid = inst.attacker_grid();

  SimTrace trace;
  std::vector<dyn::Trajectory> trajs = defender_trajectories(inst, controls);
  trace.defender_states.assign(nd, {});
  for (int i = 0; i < nd; ++i) {
    for (int k = 0; k <= steps; ++k) {
      trace.defender_states[i].push_back(trajs[static_cast<size_t>(i)].at(
          std::min(agrid.node_time(k), trajs[static_cast<size_t>(i)].horizon())));
    }
  }

  for (const drills::AttackerSpec& a : inst.attackers) {
    AttackerTrace at;
    at.intercept.assign(nd, {});
    at.warning.assign(nd, {});
    double p = a.p_s;
    double q = a.q_s;
    int a1 = 1;
    int a2 = 0;
    for (int k = 0; k <= steps; ++k) {
      at.p.push_back(p);
      at.q.push_back(q);
      at.attack.push_back(a1);
      at.retreat.push_back(a2);

      const double zm = drills::zone_margin(p, q, g);
      const int zone = zm <= 0.0 ? 1 : 0;
      at.zone_margins.push_back(zm);
      at.zone.push_back(zone);
      int any_d = 0;
      int any_w = 0;
      for (int i = 0; i < nd; ++i) {
        const dyn::VehicleState& ds = trace.defender_states[i][static_cast<size_t>(k)];
        const int din =
            drills::intercept_margin(p, q, ds.x, ds.y, g) <= 0.0 ? 1 : 0;
        at.intercept[i].push_back(din);
        any_d |= din;
        if (two) {
          const int win =
              drills::warning_margin(ds.x, ds.y, p, q, g) <= 0.0 ? 1 : 0;
          at.warning[i].push_back(win);
          any_w |= win;
        }
      }
      at.intercept_any.push_back(any_d);
      at.warning_any.push_back(any_w);
      if (k >= 1) trace.score += zone;

      if (k < steps) {
        const double dt = inst.attacker_steps[static_cast<size_t>(k)];
        const double dir = static_cast<double>(a1 - a2);
        p += a.v_p * dt * dir;
        q += a.v_q * dt * dir;
        const bool active = (a1 + a2) == 1;
        const bool clean = zone == 0 && any_d == 0;
        if (two) {
          const int n1 = (active && clean && any_w == 0) ? 1 : 0;
          const int n2 = (active && clean && any_w == 1) ? 1 : 0;
          a1 = n1;
          a2 = n2;
        } else {
          a1 = (a1 == 1 && clean) ? 1 : 0;
        }
      }
    }
    trace.attackers.push_back(std::move(at));
  }
  return trace;
}

ValidationReport validate(const drills::DrillInstance& inst,
                          const drills::DrillSolution& sol) {
  const bool two = inst.kind == drills::DrillKind::Drill2;
  const int nd = static_cast<int>(inst.defenders.size());
  const int na = static_cast<int>(inst.attackers.size());
  const int steps = static_cast<int>(inst.attacker_steps.size());
  const drills::DrillGeometry& g = inst.geometry;
  const double eps = inst.encoding.indicator_eps;
  const dyn::TimeGrid agrid = inst.attacker_grid();

  ValidationReport report;
  std::vector<dyn::Trajectory> trajs = defender_trajectories(inst, sol.controls);

  double effort = 0.0;
  for (const auto& u : sol.controls) {
    for (const auto& [ux, uy] : u) effort += std::abs(ux) + std::abs(uy);
  }

  const auto diverge = [&](int j, int k, const std::string& field,
                           double solver_v, double sim_v) {
    report.divergences.push_back({j, k, field, solver_v, sim_v});
  };
  const auto note = [&](int j, int k, const std::string& field) {
    report.ambiguous.push_back("attacker " + std::to_string(j + 1) + " step " +
                               std::to_string(k) + ": " + field +
                               " within eps of the boundary");
  };

  for (int j = 0; j < na && report.divergences.empty(); ++j) {
    const drills::AttackerSpec& a = inst.attackers[j];
    double p = a.p_s;
    double q = a.q_s;
    int a1 = 1;
    int a2 = 0;
    for (int k = 0; k <= steps; ++k) {
      // Kinematic consistency against the solver's position series.
      if (std::abs(p - sol.p[j][static_cast<size_t>(k)]) > 1e-6 ||
          std::abs(q - sol.q[j][static_cast<size_t>(k)]) > 1e-6) {
        diverge(j, k, "position", sol.p[j][static_cast<size_t>(k)], p);
        break;
      }
      if (k >= 1 && (sol.attack[j][k] != a1 || (two && sol.retreat[j][k] != a2))) {
        diverge(j, k, "mode", sol.attack[j][k], a1);
        break;
      }

      // Indicators from exact geometry, adopting solver values in the
      // deadband.
      const double zm = drills::zone_margin(p, q, g);
      int zone = zm <= 0.0 ? 1 : 0;
      const int solver_zone =
          k == 0 ? zone : sol.zone[j][static_cast<size_t>(k)];
      if (std::abs(zm) < eps) {
        if (solver_zone != zone) note(j, k, "zone");
        zone = solver_zone;
      } else if (k >= 1 && solver_zone != zone) {
        diverge(j, k, "zone", solver_zone, zone);
        break;
      }
      report.sim_score += k >= 1 ? zone : 0;

      int any_d = 0;
      int any_w = 0;
      bool broke = false;
      for (int i = 0; i < nd; ++i) {
        const dyn::VehicleState ds = trajs[static_cast<size_t>(i)].at(
            std::min(agrid.node_time(k), trajs[static_cast<size_t>(i)].horizon()));
        const double dm = drills::intercept_margin(p, q, ds.x, ds.y, g);
        int din = dm <= 0.0 ? 1 : 0;
        const int solver_d = sol.intercept[i][j][static_cast<size_t>(k)];
        if (std::abs(dm) < eps) {
          if (solver_d != din) note(j, k, "intercept d" + std::to_string(i + 1));
          din = solver_d;
        } else if (k >= 1 && solver_d != din) {
          diverge(j, k, "intercept d" + std::to_string(i + 1), solver_d, din);
          broke = true;
          break;
        }
        any_d |= din;
        if (two) {
          const double wm = drills::warning_margin(ds.x, ds.y, p, q, g);
          int win = wm <= 0.0 ? 1 : 0;
          const int solver_w = sol.warning[i][j][static_cast<size_t>(k)];
          if (std::abs(wm) < eps) {
            if (solver_w != win) note(j, k, "warning w" + std::to_string(i + 1));
            win = solver_w;
          } else if (k >= 1 && solver_w != win) {
            diverge(j, k, "warning w" + std::to_string(i + 1), solver_w, win);
            broke = true;
            break;
          }
          any_w |= win;
        }
      }
      if (broke) break;

      if (k < steps) {
        const double dt = inst.attacker_steps[static_cast<size_t>(k)];
        const double dir = static_cast<double>(a1 - a2);
        p += a.v_p * dt * dir;
        q += a.v_q * dt * dir;
        const bool active = (a1 + a2) == 1;
        const bool clean = zone == 0 && any_d == 0;
        if (two) {
          const int n1 = (active && clean && any_w == 0) ? 1 : 0;
          const int n2 = (active && clean && any_w == 1) ? 1 : 0;
          a1 = n1;
          a2 = n2;
        } else {
          a1 = (a1 == 1 && clean) ? 1 : 0;
        }
      }
    }
  }

  report.solver_zone_sum = sol.zone_entries;
  report.recomputed_objective = sol.zone_entries + inst.fuel_weight * effort;
  report.clean = report.divergences.empty();
  return report;
}

}  // namespace mvmilp::sim
