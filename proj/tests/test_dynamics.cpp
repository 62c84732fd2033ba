#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mvmilp/dynamics.hpp"
#include "mvmilp/simplex.hpp"

using namespace mvmilp;
using namespace mvmilp::dyn;

namespace {

// The explicit summation solution, independent of the iterated map.
double explicit_position(const TimeGrid& g, double x0, double vx0,
                         std::span<const double> u, int k) {
  if (k == 0) return x0;
  double x = x0 + (1.0 - std::exp(-g.node_time(k))) * vx0;
  for (int i = 0; i + 2 <= k; ++i) {
    const double ti = g.step(i);
    x += (ti - 1.0 + std::exp(-ti)) * u[static_cast<size_t>(i)];
    x += (1.0 - std::exp(g.node_time(i + 1) - g.node_time(k))) *
         (1.0 - std::exp(-ti)) * u[static_cast<size_t>(i)];
  }
  const double tl = g.step(k - 1);
  x += (tl - 1.0 + std::exp(-tl)) * u[static_cast<size_t>(k) - 1];
  return x;
}

double explicit_velocity(const TimeGrid& g, double vx0,
                         std::span<const double> u, int k) {
  if (k == 0) return vx0;
  double v = std::exp(-g.node_time(k)) * vx0;
  for (int i = 0; i + 2 <= k; ++i) {
    v += std::exp(g.node_time(i + 1) - g.node_time(k)) *
         (1.0 - std::exp(-g.step(i))) * u[static_cast<size_t>(i)];
  }
  v += (1.0 - std::exp(-g.step(k - 1))) * u[static_cast<size_t>(k) - 1];
  return v;
}

}  // namespace

TEST_CASE("time grid validates and exposes node times") {
  CHECK_THROWS_AS(TimeGrid({0.3, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({}), std::invalid_argument);
  const TimeGrid g({0.3, 0.5});
  CHECK(g.node_time(0) == 0.0);
  CHECK(g.node_time(2) == doctest::Approx(0.8));
  CHECK(g.step_index(0.0) == 0);
  CHECK(g.step_index(0.3) == 1);  // left-closed at interior nodes
  CHECK(g.step_index(0.8) == 1);  // final node binds to the last step
  CHECK_THROWS_AS(g.step_index(0.9), std::out_of_range);
}

TEST_CASE("discretization matches the closed forms at T = 0.3") {
  const DiscreteDynamics d{TimeGrid::uniform(0.3, 1)};
  const auto A = d.state_matrix(0);
  const auto B = d.input_matrix(0);
  CHECK(A[2][2] == doctest::Approx(0.7408182207).epsilon(1e-9));
  CHECK(A[0][2] == doctest::Approx(0.2591817793).epsilon(1e-9));
  CHECK(A[0][0] == 1.0);
  CHECK(A[0][1] == 0.0);
  CHECK(B[0][0] == doctest::Approx(0.0408182207).epsilon(1e-8));
  CHECK(B[2][0] == doctest::Approx(0.2591817793).epsilon(1e-9));
  CHECK(B[0][1] == 0.0);
}

TEST_CASE("tiny steps approach the identity map") {
  const DiscreteDynamics d{TimeGrid::uniform(0.001, 1)};
  const auto A = d.state_matrix(0);
  const auto B = d.input_matrix(0);
  CHECK(A[2][2] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(A[0][2] == doctest::Approx(0.001).epsilon(1e-3));
  CHECK(std::abs(B[0][0]) < 1e-6);  // second-order small
}

TEST_CASE("nonuniform grids get per-step matrices") {
  const DiscreteDynamics d{TimeGrid({0.3, 0.5})};
  CHECK(d.state_matrix(0)[2][2] != d.state_matrix(1)[2][2]);
}

TEST_CASE("propagation from rest with no input stays at rest") {
  const DiscreteDynamics d{TimeGrid::uniform(0.3, 5)};
  const std::vector<Control> u(5, {0.0, 0.0});
  const auto states = propagate({}, u, d);
  for (const VehicleState& s : states) {
    CHECK(s.x == 0.0);
    CHECK(s.vx == 0.0);
  }
}

TEST_CASE("single step from (0,0,1,0) with zero input") {
  const DiscreteDynamics d{TimeGrid::uniform(0.3, 1)};
  const std::vector<Control> u(1, {0.0, 0.0});
  const auto states = propagate({0.0, 0.0, 1.0, 0.0}, u, d);
  CHECK(states[1].x == doctest::Approx(0.2591817793).epsilon(1e-9));
  CHECK(states[1].y == 0.0);
  CHECK(states[1].vx == doctest::Approx(0.7408182207).epsilon(1e-9));
  CHECK(states[1].vy == 0.0);
}

TEST_CASE("intersample state: boundary identities and the mid-step value") {
  const VehicleState s{0.0, 0.0, 1.0, 0.0};
  const Control u{0.0, 0.0};
  const VehicleState at0 = intersample_state(s, u, 0.0, 0.3);
  CHECK(at0.x == doctest::Approx(s.x));
  CHECK(at0.vx == doctest::Approx(s.vx));

  const VehicleState mid = intersample_state(s, u, 0.15, 0.3);
  CHECK(mid.x == doctest::Approx(0.1392920236).epsilon(1e-9));

  const DiscreteDynamics d{TimeGrid::uniform(0.3, 1)};
  const std::vector<Control> uu(1, {0.4, -0.2});
  const auto states = propagate({0.1, -0.2, 0.5, 0.3}, uu, d);
  const VehicleState end =
      intersample_state({0.1, -0.2, 0.5, 0.3}, uu[0], 0.3, 0.3);
  CHECK(end.x == doctest::Approx(states[1].x).epsilon(1e-12));
  CHECK(end.y == doctest::Approx(states[1].y).epsilon(1e-12));
  CHECK(end.vx == doctest::Approx(states[1].vx).epsilon(1e-12));
  CHECK(end.vy == doctest::Approx(states[1].vy).epsilon(1e-12));

  CHECK_THROWS_AS(intersample_state(s, u, 0.4, 0.3), std::out_of_range);
}

TEST_CASE("iterated map agrees with the explicit summation formula") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> steps;
    const int n = 2 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) steps.push_back(0.1 + 0.4 * (dist(rng) + 1.0));
    const TimeGrid g(steps);
    const DiscreteDynamics d{g};
    std::vector<Control> u;
    std::vector<double> ux;
    for (int k = 0; k < n; ++k) {
      u.push_back({dist(rng), dist(rng)});
      ux.push_back(u.back()[0]);
    }
    const double x0 = dist(rng);
    const double vx0 = dist(rng);
    const auto states = propagate({x0, 0.0, vx0, 0.0}, u, d);
    for (int k = 0; k <= n; ++k) {
      CHECK(states[static_cast<size_t>(k)].x ==
            doctest::Approx(explicit_position(g, x0, vx0, ux, k))
                .epsilon(1e-10));
      CHECK(states[static_cast<size_t>(k)].vx ==
            doctest::Approx(explicit_velocity(g, vx0, ux, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("semigroup: two steps compose like one closed form with held input") {
  const TimeGrid two({0.3, 0.5});
  const DiscreteDynamics d2{two};
  const Control u{0.7, -0.3};
  const auto states = propagate({0.2, -0.1, 0.4, 0.9}, {{u, u}}, d2);
  const VehicleState direct =
      intersample_state({0.2, -0.1, 0.4, 0.9}, u, 0.8, 0.8);
  CHECK(states[2].x == doctest::Approx(direct.x).epsilon(1e-10));
  CHECK(states[2].y == doctest::Approx(direct.y).epsilon(1e-10));
  CHECK(states[2].vx == doctest::Approx(direct.vx).epsilon(1e-10));
  CHECK(states[2].vy == doctest::Approx(direct.vy).epsilon(1e-10));
}

TEST_CASE("symbolic trajectory evaluates to the numeric one") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = 5;
  const TimeGrid g({0.2, 0.35, 0.3, 0.25, 0.4});

  MilpModel model;
  std::vector<std::pair<VarId, VarId>> ids;
  for (int k = 0; k < n; ++k) {
    ids.push_back({model.add_continuous(-1, 1), model.add_continuous(-1, 1)});
  }
  const VehicleState start{0.3, -0.2, 0.6, -0.1};
  const SymbolicTrajectory sym(start, ids, g);

  // t = 0 is the constant initial position.
  const auto [x0, y0] = sym.position(0.0);
  CHECK(x0.is_constant());
  CHECK(x0.constant() == doctest::Approx(start.x));
  CHECK(y0.constant() == doctest::Approx(start.y));

  // Coefficient of u_x[0] at the first node is the position gain.
  const StateExpr& n1 = sym.node(1);
  CHECK(n1.x.coefficient(ids[0].first) ==
        doctest::Approx(g.step(0) - 1.0 + std::exp(-g.step(0))));

  const DiscreteDynamics d{g};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Control> u;
    std::vector<double> flat(static_cast<size_t>(2 * n));
    for (int k = 0; k < n; ++k) {
      u.push_back({dist(rng), dist(rng)});
      flat[static_cast<size_t>(2 * k)] = u.back()[0];
      flat[static_cast<size_t>(2 * k + 1)] = u.back()[1];
    }
    const Trajectory traj(d, start, u);
    const double t = g.horizon() * 0.999 * std::abs(dist(rng));
    const StateExpr e = sym.at(t);
    const VehicleState s = traj.at(t);
    CHECK(e.x.evaluate(flat) == doctest::Approx(s.x).epsilon(1e-10));
    CHECK(e.y.evaluate(flat) == doctest::Approx(s.y).epsilon(1e-10));
    CHECK(e.vx.evaluate(flat) == doctest::Approx(s.vx).epsilon(1e-10));
    CHECK(e.vy.evaluate(flat) == doctest::Approx(s.vy).epsilon(1e-10));
  }
}

TEST_CASE("control polygon: M_u = 4 reduces to box constraints") {
  MilpModel m;
  std::vector<std::pair<VarId, VarId>> ids{
      {m.add_continuous(-1, 1), m.add_continuous(-1, 1)}};
  const auto rows = control_polygon_constraints(ids, 4);
  REQUIRE(rows.size() == 4);
  const double lim = std::cos(std::numbers::pi / 4);
  // Feasibility of (0.7, 0) and infeasibility of (0.72, 0) pin |u_x| <= lim.
  std::vector<double> v{0.7, 0.0};
  for (const Constraint& c : rows) CHECK(c.violation(v) <= 1e-9);
  v[0] = lim + 0.01;
  bool violated = false;
  for (const Constraint& c : rows) violated = violated || c.violation(v) > 0;
  CHECK(violated);
  CHECK_THROWS_AS(control_polygon_constraints(ids, 2), std::invalid_argument);
}

TEST_CASE("control polygon: u = (0,0) feasible, (1,0) infeasible for M = 20") {
  MilpModel m;
  std::vector<std::pair<VarId, VarId>> ids{
      {m.add_continuous(-1, 1), m.add_continuous(-1, 1)}};
  const auto rows = control_polygon_constraints(ids, 20);
  std::vector<double> v{0.0, 0.0};
  for (const Constraint& c : rows) CHECK(c.violation(v) <= 0.0);
  v[0] = 1.0;  // cos(pi/20) = 0.9876883406 < 1
  double worst = 0.0;
  for (const Constraint& c : rows) worst = std::max(worst, c.violation(v));
  CHECK(worst == doctest::Approx(1.0 - 0.9876883406).epsilon(1e-6));
}

TEST_CASE("min-effort slacks settle at |u| when forced") {
  MilpModel m;
  std::vector<std::pair<VarId, VarId>> ids{
      {m.add_continuous(-1, 1, "ux0"), m.add_continuous(-1, 1, "uy0")}};
  const auto effort = add_min_effort_objective(m, ids);
  m.add_constraint(AffineExpr::variable(ids[0].first), Sense::Equal, 0.5);
  m.set_objective(effort.objective);
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[effort.slack_ids[0].first] == doctest::Approx(0.5));
  CHECK(s.values[effort.slack_ids[0].second] == doctest::Approx(0.0));
  CHECK(s.objective == doctest::Approx(0.5));
}
