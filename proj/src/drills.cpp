#include "mvmilp/drills.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvmilp::drills {
namespace {

constexpr double kPi = std::numbers::pi;

double polygon_margin(double x, double y, double inradius, int sides) {
  double worst = -kInf;
  for (int m = 1; m <= sides; ++m) {
    const double ang = 2.0 * kPi * m / sides;
    worst = std::max(worst, x * std::sin(ang) + y * std::cos(ang) - inradius);
  }
  return worst;  // <= 0 inside the closed polygon
}

std::string idx(int a) { return std::to_string(a); }

}  // namespace

double zone_margin(double px, double py, const DrillGeometry& g) {
  return polygon_margin(px, py, g.zone_radius, g.zone_sides);
}

double intercept_margin(double px, double py, double def_x, double def_y,
                        const DrillGeometry& g) {
  return polygon_margin(px - def_x, py - def_y, g.intercept_radius,
                        g.intercept_sides);
}

double warning_margin(double def_x, double def_y, double att_p, double att_q,
                      const DrillGeometry& g) {
  return polygon_margin(def_x - att_p, def_y - att_q,
                        g.effective_warning_radius(), g.warning_sides);
}

bool in_zone_polygon(double px, double py, const DrillGeometry& g) {
  return zone_margin(px, py, g) <= 0.0;
}

bool in_intercept_polygon(double px, double py, double def_x, double def_y,
                          const DrillGeometry& g) {
  return intercept_margin(px, py, def_x, def_y, g) <= 0.0;
}

bool in_warning_polygon(double def_x, double def_y, double att_p, double att_q,
                        const DrillGeometry& g) {
  return warning_margin(def_x, def_y, att_p, att_q, g) <= 0.0;
}

std::vector<std::array<double, 2>> polygon_vertices(double inradius, int sides,
                                                    double cx, double cy) {
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<size_t>(sides));
  const double circum = inradius / std::cos(kPi / sides);
  for (int m = 0; m < sides; ++m) {
    const double ang = 2.0 * kPi * (m + 0.5) / sides;
    out.push_back({cx + circum * std::sin(ang), cy + circum * std::cos(ang)});
  }
  return out;
}

double DrillInstance::derived_position_bound() const {
  // Reachability: |x(t)| <= |x0| + |v0| + t for the damped unit-input
  // dynamics; the attacker recursion is bounded by its total displacement.
  double horizon = 0.0;
  for (double dt : control_steps) horizon += dt;
  double pos_bound = geometry.field_radius;
  for (const DefenderSpec& d : defenders) {
    const double reach = std::max(std::abs(d.start.x), std::abs(d.start.y)) +
                         std::max(std::abs(d.start.vx), std::abs(d.start.vy)) +
                         horizon;
    pos_bound = std::max(pos_bound, reach);
  }
  double att_horizon = 0.0;
  for (double dt : attacker_steps) att_horizon += dt;
  for (const AttackerSpec& a : attackers) {
    const double reach =
        std::max(std::abs(a.p_s), std::abs(a.q_s)) +
        att_horizon * std::max(std::abs(a.v_p), std::abs(a.v_q));
    pos_bound = std::max(pos_bound, reach);
  }
  return pos_bound;
}

double DrillInstance::derived_big_m() const {
  // Face rows difference two positions, hence the factor.
  const double max_r =
      std::max({geometry.zone_radius, geometry.intercept_radius,
                geometry.effective_warning_radius()});
  return 3.0 * derived_position_bound() + max_r + 1.0;
}

DurationCheck duration_check(const DrillInstance& instance) {
  DurationCheck out;
  double horizon = 0.0;
  for (double dt : instance.attacker_steps) horizon += dt;
  out.bounds.reserve(instance.attackers.size());
  double worst = 0.0;
  for (size_t j = 0; j < instance.attackers.size(); ++j) {
    const AttackerSpec& a = instance.attackers[j];
    const double speed2 = a.v_p * a.v_p + a.v_q * a.v_q;
    if (speed2 <= 0.0) {
      throw std::invalid_argument("attacker " + idx(static_cast<int>(j)) +
                                  " has zero velocity");
    }
    const double bound = std::sqrt((a.p_s * a.p_s + a.q_s * a.q_s) / speed2);
    out.bounds.push_back(bound);
    if (bound > worst) {
      worst = bound;
      out.binding_attacker = static_cast<int>(j);
    }
  }
  out.margin = horizon - worst;
  out.ok = out.margin >= 0.0;
  return out;
}

namespace {

struct Builder {
  const DrillInstance& inst;
  DrillMilp out;
  int nd, na, steps;  // defenders, attackers, attacker steps N_a
  double pos_bound;
  logic::BigMParams bigm;
  std::vector<dyn::SymbolicTrajectory> sym;  // per defender
  AffineExpr objective;

  explicit Builder(const DrillInstance& instance) : inst(instance) {
    nd = static_cast<int>(inst.defenders.size());
    na = static_cast<int>(inst.attackers.size());
    steps = static_cast<int>(inst.attacker_steps.size());
    pos_bound = inst.derived_position_bound();
    bigm = {inst.encoding.big_m > 0.0 ? inst.encoding.big_m
                                      : inst.derived_big_m(),
            inst.encoding.indicator_eps};
  }

  MilpModel& model() { return out.model; }
  DrillDirectory& dir() { return out.dir; }

  VarId named(VarKind kind, double lo, double up, std::string name) {
    const VarId v = model().add_variable(kind, lo, up, name);
    dir().by_name.emplace(std::move(name), v);
    return v;
  }

  void validate() {
    if (nd < 1) throw std::invalid_argument("drill needs at least one defender");
    if (na < 1) throw std::invalid_argument("drill needs at least one attacker");
    const DrillGeometry& g = inst.geometry;
    if (g.zone_sides < 3 || g.intercept_sides < 3 || g.warning_sides < 3 ||
        inst.encoding.control_sides < 3 || inst.encoding.avoid_sides < 3) {
      throw std::invalid_argument("polygon side counts must be >= 3");
    }
    if (!(g.zone_radius > 0.0) || !(g.intercept_radius > 0.0)) {
      throw std::invalid_argument("geometry radii must be positive");
    }
    if (inst.kind == DrillKind::Drill2 &&
        g.effective_warning_radius() <= g.intercept_radius) {
      throw std::invalid_argument("Drill 2 requires R_I < R_W");
    }
    const dyn::TimeGrid cgrid = inst.control_grid();
    const dyn::TimeGrid agrid = inst.attacker_grid();
    if (agrid.horizon() > cgrid.horizon() + 1e-9) {
      throw std::invalid_argument(
          "attacker grid extends past the defender control grid");
    }
    for (double t : inst.zone_avoidance_times) {
      if (t <= 0.0 || t > cgrid.horizon() + 1e-9) {
        throw std::invalid_argument("zone avoidance time outside the horizon");
      }
    }
    for (const DefenderSpec& d : inst.defenders) {
      if (polygon_margin(d.start.x, d.start.y, g.zone_radius, g.zone_sides) <
          -1e-12) {
        throw std::invalid_argument(
            "defender starts inside the Defense Zone polygon");
      }
    }
  }

  void build_defenders() {
    const dyn::TimeGrid cgrid = inst.control_grid();
    const int nu = cgrid.num_steps();
    dir().control.resize(nd);
    dir().effort_slack.resize(nd);
    for (int i = 0; i < nd; ++i) {
      auto& ids = dir().control[i];
      for (int k = 0; k < nu; ++k) {
        const VarId ux = named(VarKind::Continuous, -1.0, 1.0,
                               "ux" + idx(i + 1) + "_" + idx(k));
        const VarId uy = named(VarKind::Continuous, -1.0, 1.0,
                               "uy" + idx(i + 1) + "_" + idx(k));
        ids.push_back({ux, uy});
      }
      model().add_constraints(dyn::control_polygon_constraints(
          ids, inst.encoding.control_sides));
      sym.emplace_back(inst.defenders[i].start, ids, cgrid);
      if (inst.fuel_weight > 0.0) {
        dyn::EffortObjective effort = dyn::add_min_effort_objective(
            model(), ids, "z" + idx(i + 1) + "_");
        dir().effort_slack[i] = effort.slack_ids;
        objective += inst.fuel_weight * effort.objective;
      }
    }
  }

  // Defender positions at the attacker sample times, as bounded intermediate
  // variables tied to the inter-sample expressions.
  void build_defender_position_vars() {
    const dyn::TimeGrid agrid = inst.attacker_grid();
    const double bound = pos_bound + 1.0;
    dir().defender_at_attacker_time.assign(
        nd, std::vector<std::pair<VarId, VarId>>(steps + 1, {-1, -1}));
    for (int i = 0; i < nd; ++i) {
      for (int k = 1; k <= steps; ++k) {
        const double t = agrid.node_time(k);
        const VarId xa = named(VarKind::Continuous, -bound, bound,
                               "xa" + idx(i + 1) + "_" + idx(k));
        const VarId ya = named(VarKind::Continuous, -bound, bound,
                               "ya" + idx(i + 1) + "_" + idx(k));
        auto [px, py] = sym[static_cast<size_t>(i)].position(t);
        px.add_term(xa, -1.0);
        py.add_term(ya, -1.0);
        model().add_constraint(std::move(px), Sense::Equal, 0.0);
        model().add_constraint(std::move(py), Sense::Equal, 0.0);
        dir().defender_at_attacker_time[i][k] = {xa, ya};
      }
    }
  }

  void build_attackers() {
    const bool two = inst.kind == DrillKind::Drill2;
    dir().p.resize(na);
    dir().q.resize(na);
    dir().attack.assign(na, std::vector<VarId>(steps + 1, -1));
    dir().retreat.assign(na, std::vector<VarId>(steps + 1, -1));
    dir().zone0.resize(na);
    dir().intercept_any0.resize(na);
    dir().warning_any0.resize(na);
    dir().attack1.resize(na);
    dir().retreat1.resize(na);

    for (int j = 0; j < na; ++j) {
      const AttackerSpec& a = inst.attackers[j];
      double reach = std::max(std::abs(a.p_s), std::abs(a.q_s));
      for (double dt : inst.attacker_steps) {
        reach += dt * std::max(std::abs(a.v_p), std::abs(a.v_q));
      }
      const double pb = reach + 1.0;

      auto& pj = dir().p[j];
      auto& qj = dir().q[j];
      pj.push_back(named(VarKind::Continuous, a.p_s, a.p_s,
                         "p" + idx(j + 1) + "_0"));
      qj.push_back(named(VarKind::Continuous, a.q_s, a.q_s,
                         "q" + idx(j + 1) + "_0"));
      for (int k = 1; k <= steps; ++k) {
        pj.push_back(named(VarKind::Continuous, -pb, pb,
                           "p" + idx(j + 1) + "_" + idx(k)));
        qj.push_back(named(VarKind::Continuous, -pb, pb,
                           "q" + idx(j + 1) + "_" + idx(k)));
      }
      for (int k = 1; k <= steps; ++k) {
        dir().attack[j][k] = named(
            VarKind::Binary, 0.0, 1.0,
            (two ? "a1_" : "a") + idx(j + 1) + "_" + idx(k));
        if (two) {
          dir().retreat[j][k] = named(VarKind::Binary, 0.0, 1.0,
                                      "a2_" + idx(j + 1) + "_" + idx(k));
          AffineExpr excl = AffineExpr::variable(dir().attack[j][k]) +
                            AffineExpr::variable(dir().retreat[j][k]);
          model().add_constraint(std::move(excl), Sense::LessEq, 1.0);
        }
      }

      // Kinematic recursion; step 0 uses the initial mode constants
      // a[0] = 1 (Drill 1) or (a_1, a_2)[0] = (1, 0).
      for (int k = 0; k < steps; ++k) {
        const double dt = inst.attacker_steps[static_cast<size_t>(k)];
        AffineExpr prow = AffineExpr::variable(pj[static_cast<size_t>(k) + 1]) -
                          AffineExpr::variable(pj[static_cast<size_t>(k)]);
        AffineExpr qrow = AffineExpr::variable(qj[static_cast<size_t>(k) + 1]) -
                          AffineExpr::variable(qj[static_cast<size_t>(k)]);
        double rhs_p = 0.0, rhs_q = 0.0;
        if (k == 0) {
          rhs_p = a.v_p * dt;
          rhs_q = a.v_q * dt;
        } else {
          prow.add_term(dir().attack[j][k], -a.v_p * dt);
          qrow.add_term(dir().attack[j][k], -a.v_q * dt);
          if (two) {
            prow.add_term(dir().retreat[j][k], a.v_p * dt);
            qrow.add_term(dir().retreat[j][k], a.v_q * dt);
          }
        }
        model().add_constraint(std::move(prow), Sense::Equal, rhs_p);
        model().add_constraint(std::move(qrow), Sense::Equal, rhs_q);
      }
    }
  }

  // Step-0 indicators are data (both sides are initial conditions), so the
  // step-1 modes are pinned by equality rows.
  void pin_first_modes() {
    const bool two = inst.kind == DrillKind::Drill2;
    const DrillGeometry& g = inst.geometry;
    for (int j = 0; j < na; ++j) {
      const AttackerSpec& a = inst.attackers[j];
      const bool zone0 = in_zone_polygon(a.p_s, a.q_s, g);
      bool intercept0 = false;
      bool warning0 = false;
      for (const DefenderSpec& d : inst.defenders) {
        intercept0 = intercept0 ||
                     in_intercept_polygon(a.p_s, a.q_s, d.start.x, d.start.y, g);
        if (two) {
          warning0 = warning0 ||
                     in_warning_polygon(d.start.x, d.start.y, a.p_s, a.q_s, g);
        }
      }
      dir().zone0[j] = zone0 ? 1 : 0;
      dir().intercept_any0[j] = intercept0 ? 1 : 0;
      dir().warning_any0[j] = warning0 ? 1 : 0;

      const bool clean = !zone0 && !intercept0;
      int a1;
      int a2 = 0;
      if (two) {
        a1 = (clean && !warning0) ? 1 : 0;
        a2 = (clean && warning0) ? 1 : 0;
      } else {
        a1 = clean ? 1 : 0;
      }
      dir().attack1[j] = a1;
      dir().retreat1[j] = a2;
      model().add_constraint(AffineExpr::variable(dir().attack[j][1]),
                             Sense::Equal, a1);
      if (two) {
        model().add_constraint(AffineExpr::variable(dir().retreat[j][1]),
                               Sense::Equal, a2);
      }
    }
  }

  // One halfplane-indicator polygon group: faces plus the AND conjunction.
  VarId indicator_group(const std::string& face_prefix,
                        const std::string& and_name,
                        std::vector<VarId>& face_out, const AffineExpr& x,
                        const AffineExpr& y, double inradius, int sides) {
    std::vector<VarId> faces;
    faces.reserve(static_cast<size_t>(sides));
    for (int m = 1; m <= sides; ++m) {
      const VarId gm =
          named(VarKind::Binary, 0.0, 1.0, face_prefix + "_" + idx(m));
      const double ang = 2.0 * kPi * m / sides;
      const logic::Halfplane hp{std::sin(ang), std::cos(ang), inradius};
      for (Constraint& c : logic::halfplane_indicator(gm, x, y, hp, bigm)) {
        model().add_constraint(std::move(c));
      }
      faces.push_back(gm);
    }
    const VarId any = named(VarKind::Binary, 0.0, 1.0, and_name);
    for (Constraint& c : logic::conjunction_indicator(any, faces)) {
      model().add_constraint(std::move(c));
    }
    face_out = std::move(faces);
    return any;
  }

  void build_indicators() {
    const bool two = inst.kind == DrillKind::Drill2;
    const DrillGeometry& g = inst.geometry;
    auto& d = dir();
    d.zone.assign(na, std::vector<VarId>(steps + 1, -1));
    d.zone_face.assign(na, std::vector<std::vector<VarId>>(steps + 1));
    d.intercept.assign(
        nd, std::vector<std::vector<VarId>>(na, std::vector<VarId>(steps + 1, -1)));
    d.intercept_face.resize(nd);
    for (auto& per_def : d.intercept_face) {
      per_def.assign(na, std::vector<std::vector<VarId>>(steps + 1));
    }
    d.intercept_any.assign(na, std::vector<VarId>(steps + 1, -1));
    if (two) {
      d.warning = d.intercept;  // same shape, reset below
      d.warning_face = d.intercept_face;
      d.warning_any = d.intercept_any;
    }

    for (int j = 0; j < na; ++j) {
      for (int k = 1; k <= steps; ++k) {
        const AffineExpr px = AffineExpr::variable(d.p[j][static_cast<size_t>(k)]);
        const AffineExpr qx = AffineExpr::variable(d.q[j][static_cast<size_t>(k)]);
        d.zone[j][k] = indicator_group(
            "g" + idx(j + 1) + "_" + idx(k), "gamma" + idx(j + 1) + "_" + idx(k),
            d.zone_face[j][static_cast<size_t>(k)], px, qx, g.zone_radius,
            g.zone_sides);

        for (int i = 0; i < nd; ++i) {
          const auto [xa, ya] = d.defender_at_attacker_time[i][k];
          const AffineExpr rel_p = px - AffineExpr::variable(xa);
          const AffineExpr rel_q = qx - AffineExpr::variable(ya);
          d.intercept[i][j][k] = indicator_group(
              "d" + idx(i + 1) + "_" + idx(j + 1) + "_" + idx(k),
              "delta" + idx(i + 1) + "_" + idx(j + 1) + "_" + idx(k),
              d.intercept_face[i][j][static_cast<size_t>(k)], rel_p, rel_q,
              g.intercept_radius, g.intercept_sides);
          if (two) {
            const AffineExpr dx = AffineExpr::variable(xa) - px;
            const AffineExpr dy = AffineExpr::variable(ya) - qx;
            d.warning[i][j][k] = indicator_group(
                "w" + idx(i + 1) + "_" + idx(j + 1) + "_" + idx(k),
                "omega" + idx(i + 1) + "_" + idx(j + 1) + "_" + idx(k),
                d.warning_face[i][j][static_cast<size_t>(k)], dx, dy,
                g.effective_warning_radius(), g.warning_sides);
          }
        }
        d.intercept_any[j][k] =
            aggregate_or("deltaOR" + idx(j + 1) + "_" + idx(k), j, k,
                         d.intercept);
        if (two) {
          d.warning_any[j][k] =
              aggregate_or("omegaOR" + idx(j + 1) + "_" + idx(k), j, k,
                           d.warning);
        }
      }
    }
  }

  // OR over defenders; with a single defender the pair indicator is reused.
  VarId aggregate_or(const std::string& name, int j, int k,
                     const std::vector<std::vector<std::vector<VarId>>>& per_pair) {
    if (nd == 1) return per_pair[0][j][k];
    const VarId any = named(VarKind::Binary, 0.0, 1.0, name);
    AffineExpr sum;
    for (int i = 0; i < nd; ++i) {
      const VarId part = per_pair[i][j][k];
      model().add_constraint(
          AffineExpr::variable(part) - AffineExpr::variable(any),
          Sense::LessEq, 0.0);
      sum.add_term(part, 1.0);
    }
    sum.add_term(any, -1.0);
    model().add_constraint(std::move(sum), Sense::GreaterEq, 0.0);
    return any;
  }

  void build_state_machines() {
    const bool two = inst.kind == DrillKind::Drill2;
    auto& d = dir();
    for (int j = 0; j < na; ++j) {
      for (int k = 1; k < steps; ++k) {
        const VarId gam = d.zone[j][k];
        const VarId del = d.intercept_any[j][k];
        if (!two) {
          const VarId ak = d.attack[j][k];
          const VarId an = d.attack[j][k + 1];
          model().add_constraint(
              AffineExpr::variable(an) + AffineExpr::variable(del),
              Sense::LessEq, 1.0);
          model().add_constraint(
              AffineExpr::variable(an) - AffineExpr::variable(ak),
              Sense::LessEq, 0.0);
          model().add_constraint(
              AffineExpr::variable(an) + AffineExpr::variable(gam),
              Sense::LessEq, 1.0);
          AffineExpr last = AffineExpr::variable(ak);
          last.add_term(del, -1.0);
          last.add_term(gam, -1.0);
          last.add_term(an, -1.0);
          model().add_constraint(std::move(last), Sense::LessEq, 0.0);
          continue;
        }
        const VarId om = d.warning_any[j][k];
        const VarId a1 = d.attack[j][k];
        const VarId a2 = d.retreat[j][k];
        const VarId b1 = d.attack[j][k + 1];
        const VarId b2 = d.retreat[j][k + 1];
        const auto add = [&](std::initializer_list<std::pair<VarId, double>>
                                 terms,
                             Sense sense, double rhs) {
          AffineExpr e;
          for (const auto& [v, c] : terms) e.add_term(v, c);
          model().add_constraint(std::move(e), sense, rhs);
        };
        add({{b1, 1.}, {a1, -1.}, {a2, 1.}, {gam, 1.}, {del, 1.}, {om, 1.}},
            Sense::GreaterEq, 0.0);
        add({{b1, 1.}, {a1, 1.}, {a2, -1.}, {gam, 1.}, {del, 1.}, {om, 1.}},
            Sense::GreaterEq, 0.0);
        add({{b2, 1.}, {a1, 1.}, {a2, -1.}, {gam, 1.}, {del, 1.}, {om, -1.}},
            Sense::GreaterEq, -1.0);
        add({{b2, 1.}, {a1, -1.}, {a2, 1.}, {gam, 1.}, {del, 1.}, {om, -1.}},
            Sense::GreaterEq, -1.0);
        add({{b1, 1.}, {a1, 1.}, {a2, 1.}}, Sense::LessEq, 2.0);
        add({{b1, 1.}, {a1, -1.}, {a2, -1.}}, Sense::LessEq, 0.0);
        add({{b1, 1.}, {gam, 1.}}, Sense::LessEq, 1.0);
        add({{b1, 1.}, {del, 1.}}, Sense::LessEq, 1.0);
        add({{b1, 1.}, {om, 1.}}, Sense::LessEq, 1.0);
        add({{b2, 1.}, {a1, -1.}, {a2, -1.}}, Sense::LessEq, 0.0);
        add({{b2, 1.}, {a1, 1.}, {a2, 1.}}, Sense::LessEq, 2.0);
        add({{b2, 1.}, {gam, 1.}}, Sense::LessEq, 1.0);
        add({{b2, 1.}, {del, 1.}}, Sense::LessEq, 1.0);
        add({{b2, 1.}, {om, -1.}}, Sense::LessEq, 0.0);
      }
    }
  }

  void build_zone_avoidance() {
    auto& d = dir();
    d.avoid_face.resize(nd);
    if (inst.zone_avoidance_times.empty()) return;
    const DrillGeometry& g = inst.geometry;
    avoid::Obstacle zone = avoid::Obstacle::static_circle(
        0.0, 0.0, g.zone_radius, inst.encoding.avoid_sides);
    const double bound = pos_bound + 1.0;
    for (int i = 0; i < nd; ++i) {
      int ti = 0;
      for (double t : inst.zone_avoidance_times) {
        const VarId xo = named(VarKind::Continuous, -bound, bound,
                               "xo" + idx(i + 1) + "_" + idx(ti));
        const VarId yo = named(VarKind::Continuous, -bound, bound,
                               "yo" + idx(i + 1) + "_" + idx(ti));
        auto [px, py] = sym[static_cast<size_t>(i)].position(t);
        px.add_term(xo, -1.0);
        py.add_term(yo, -1.0);
        model().add_constraint(std::move(px), Sense::Equal, 0.0);
        model().add_constraint(std::move(py), Sense::Equal, 0.0);
        avoid::AvoidanceEmission em = avoid::add_avoidance_constraints(
            model(), AffineExpr::variable(xo), AffineExpr::variable(yo), zone,
            t, bigm.H, 1.0, "b" + idx(i + 1) + "_" + idx(ti));
        for (VarId b : em.indicators) {
          d.avoid_face[i].push_back(b);
          d.by_name.emplace(
              model().variables()[static_cast<size_t>(b)].name, b);
        }
        ++ti;
      }
    }
  }

  void finish_objective() {
    for (int j = 0; j < na; ++j) {
      for (int k = 1; k <= steps; ++k) {
        objective.add_term(dir().zone[j][k], 1.0);
      }
    }
    model().set_objective(objective);
  }

  DrillMilp run() {
    validate();
    build_defenders();
    build_defender_position_vars();
    build_attackers();
    pin_first_modes();
    build_indicators();
    build_state_machines();
    build_zone_avoidance();
    finish_objective();
    return std::move(out);
  }
};

}  // namespace

DrillMilp build_drill_milp(const DrillInstance& instance,
                           bool skip_duration_check) {
  if (!skip_duration_check) {
    const DurationCheck check = duration_check(instance);
    if (!check.ok) {
      throw std::invalid_argument(
          "attacker horizon too short: needs " +
          std::to_string(check.bounds[static_cast<size_t>(
              check.binding_attacker)]) +
          " (attacker " + std::to_string(check.binding_attacker + 1) + ")");
    }
  }
  return Builder(instance).run();
}

DrillSolution extract_solution(const DrillInstance& instance,
                               const DrillMilp& milp, const Solution& sol) {
  const DrillDirectory& d = milp.dir;
  const int nd = static_cast<int>(instance.defenders.size());
  const int na = static_cast<int>(instance.attackers.size());
  const int steps = static_cast<int>(instance.attacker_steps.size());
  const bool two = instance.kind == DrillKind::Drill2;
  const DrillGeometry& g = instance.geometry;

  DrillSolution out;
  out.status = sol.status;
  out.objective = sol.objective;
  out.stats = sol.stats;
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::TimeLimit) {
    return out;
  }
  const auto value = [&](VarId v) { return sol.values[static_cast<size_t>(v)]; };
  const auto bit = [&](VarId v) { return value(v) > 0.5 ? 1 : 0; };

  const dyn::DiscreteDynamics dynamics{instance.control_grid()};
  for (int i = 0; i < nd; ++i) {
    std::vector<dyn::Control> u;
    u.reserve(d.control[i].size());
    for (const auto& [ux, uy] : d.control[i]) {
      u.push_back({value(ux), value(uy)});
    }
    out.controls.push_back(u);
    out.trajectories.emplace_back(dynamics, instance.defenders[i].start,
                                  std::move(u));
  }

  out.p.assign(na, {});
  out.q.assign(na, {});
  out.attack.assign(na, std::vector<int>(steps + 1, 0));
  out.retreat.assign(na, std::vector<int>(steps + 1, 0));
  out.zone.assign(na, std::vector<int>(steps + 1, 0));
  out.intercept.assign(nd, std::vector<std::vector<int>>(
                               na, std::vector<int>(steps + 1, 0)));
  out.intercept_any.assign(na, std::vector<int>(steps + 1, 0));
  out.warning.assign(nd, std::vector<std::vector<int>>(
                             na, std::vector<int>(steps + 1, 0)));
  out.warning_any.assign(na, std::vector<int>(steps + 1, 0));

  for (int j = 0; j < na; ++j) {
    for (int k = 0; k <= steps; ++k) {
      out.p[j].push_back(value(d.p[j][static_cast<size_t>(k)]));
      out.q[j].push_back(value(d.q[j][static_cast<size_t>(k)]));
    }
    out.attack[j][0] = 1;
    out.retreat[j][0] = 0;
    out.zone[j][0] = d.zone0[j];
    out.intercept_any[j][0] = d.intercept_any0[j];
    out.warning_any[j][0] = d.warning_any0[j];
    for (int i = 0; i < nd; ++i) {
      out.intercept[i][j][0] =
          in_intercept_polygon(instance.attackers[j].p_s,
                               instance.attackers[j].q_s,
                               instance.defenders[i].start.x,
                               instance.defenders[i].start.y, g)
              ? 1
              : 0;
      if (two) {
        out.warning[i][j][0] =
            in_warning_polygon(instance.defenders[i].start.x,
                               instance.defenders[i].start.y,
                               instance.attackers[j].p_s,
                               instance.attackers[j].q_s, g)
                ? 1
                : 0;
      }
    }
    for (int k = 1; k <= steps; ++k) {
      out.attack[j][k] = bit(d.attack[j][k]);
      if (two) out.retreat[j][k] = bit(d.retreat[j][k]);
      out.zone[j][k] = bit(d.zone[j][k]);
      out.zone_entries += out.zone[j][k];
      for (int i = 0; i < nd; ++i) {
        out.intercept[i][j][k] = bit(d.intercept[i][j][k]);
        if (two) out.warning[i][j][k] = bit(d.warning[i][j][k]);
      }
      out.intercept_any[j][k] = bit(d.intercept_any[j][k]);
      if (two) out.warning_any[j][k] = bit(d.warning_any[j][k]);
    }
  }
  return out;
}

}  // namespace mvmilp::drills
