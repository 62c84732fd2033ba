#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mvmilp/model.hpp"
#include "mvmilp/simplex.hpp"

using namespace mvmilp;

TEST_CASE("affine expressions merge terms and drop zeros") {
  AffineExpr e;
  e.add_term(3, 2.0);
  e.add_term(1, 1.0);
  e.add_term(3, -2.0);
  e.add_term(2, 0.0);
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].first == 1);
  CHECK(e.coefficient(3) == 0.0);
  e.add_constant(5.0);
  const std::vector<double> vals{0.0, 2.0, 0.0, 0.0};
  CHECK(e.evaluate(vals) == doctest::Approx(7.0));
}

TEST_CASE("add_variable enforces bound rules") {
  MilpModel m;
  const VarId g = m.add_binary("gamma_1");
  CHECK(g == 0);
  CHECK(m.variable(g).lower == 0.0);
  CHECK(m.variable(g).upper == 1.0);

  const VarId u = m.add_continuous(-1.0, 1.0, "u_x_0");
  AffineExpr e = AffineExpr::variable(u);
  m.add_constraint(e, Sense::LessEq, 0.5);  // id usable in a constraint
  CHECK(m.num_constraints() == 1);

  m.add_binary("b2");
  CHECK(m.num_binaries() == 2);
  CHECK(m.num_continuous() == 1);

  CHECK_THROWS_AS(m.add_continuous(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.add_variable(VarKind::Binary, 0.0, 2.0),
                  std::invalid_argument);
}

TEST_CASE("constraints fold their constant into the rhs") {
  AffineExpr e;
  e.add_term(0, 1.0);
  e.add_constant(3.0);
  const Constraint c(e, Sense::LessEq, 5.0);
  CHECK(c.expr.constant() == 0.0);
  CHECK(c.rhs == doctest::Approx(2.0));
  AffineExpr inf_e;
  inf_e.add_constant(kInf);
  CHECK_THROWS_AS(Constraint(inf_e, Sense::Equal, 0.0), std::invalid_argument);
}

TEST_CASE("min x subject to x >= 3") {
  MilpModel m;
  const VarId x = m.add_continuous(-kInf, kInf, "x");
  m.add_constraint(AffineExpr::variable(x), Sense::GreaterEq, 3.0);
  m.set_objective(AffineExpr::variable(x));
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.values[0] == doctest::Approx(3.0));
}

TEST_CASE("absolute-value slack gadget pins z to |u|") {
  // min z s.t. -z <= 0.5 <= z
  MilpModel m;
  const VarId z = m.add_continuous(0.0, kInf, "z_x");
  AffineExpr lo = AffineExpr(0.5) - AffineExpr::variable(z);
  m.add_constraint(lo, Sense::LessEq, 0.0);
  m.add_constraint(AffineExpr::variable(z), Sense::GreaterEq, 0.5);
  m.set_objective(AffineExpr::variable(z));
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[z] == doctest::Approx(0.5));
}

TEST_CASE("simplex face optimum: min -x-y on the unit simplex") {
  MilpModel m;
  const VarId x = m.add_continuous(0.0, kInf, "x");
  const VarId y = m.add_continuous(0.0, kInf, "y");
  m.add_constraint(AffineExpr::variable(x) + AffineExpr::variable(y),
                   Sense::LessEq, 1.0);
  AffineExpr obj;
  obj.add_term(x, -1.0);
  obj.add_term(y, -1.0);
  m.set_objective(obj);
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  // Enumerating the vertices (0,0), (1,0), (0,1): the optimal face value is -1.
  CHECK(s.objective == doctest::Approx(-1.0));
  CHECK(s.values[x] + s.values[y] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded statuses are certified") {
  MilpModel infeasible;
  const VarId x = infeasible.add_continuous(0.0, 1.0, "x");
  infeasible.add_constraint(AffineExpr::variable(x), Sense::GreaterEq, 2.0);
  infeasible.set_objective(AffineExpr::variable(x));
  CHECK(solve_lp(infeasible).status == SolveStatus::Infeasible);

  MilpModel unbounded;
  const VarId y = unbounded.add_continuous(-kInf, kInf, "y");
  unbounded.add_constraint(AffineExpr::variable(y), Sense::LessEq, 5.0);
  unbounded.set_objective(AffineExpr::variable(y));
  CHECK(solve_lp(unbounded).status == SolveStatus::Unbounded);
}

TEST_CASE("equality constraints and free variables") {
  MilpModel m;
  const VarId x = m.add_continuous(-kInf, kInf, "x");
  const VarId y = m.add_continuous(-kInf, kInf, "y");
  m.add_constraint(AffineExpr::variable(x) + AffineExpr::variable(y),
                   Sense::Equal, 2.0);
  m.add_constraint(AffineExpr::variable(x) - AffineExpr::variable(y),
                   Sense::Equal, 0.0);
  m.set_objective(AffineExpr::variable(x));
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[x] == doctest::Approx(1.0));
  CHECK(s.values[y] == doctest::Approx(1.0));
}

TEST_CASE("model with no constraints optimizes onto bounds") {
  MilpModel m;
  const VarId x = m.add_continuous(-2.0, 7.0, "x");
  AffineExpr obj;
  obj.add_term(x, -1.0);
  m.set_objective(obj);
  const Solution s = solve_lp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[x] == doctest::Approx(7.0));
}

namespace {

MilpModel random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvd(1, 8);
  std::uniform_int_distribution<int> ncd(1, 12);
  std::uniform_int_distribution<int> coefd(-5, 5);
  std::uniform_int_distribution<int> sensed(0, 2);
  MilpModel m;
  const int nv = nvd(rng);
  for (int j = 0; j < nv; ++j) {
    m.add_continuous(0.0, 10.0);
  }
  const int nc = ncd(rng);
  for (int i = 0; i < nc; ++i) {
    AffineExpr e;
    for (int j = 0; j < nv; ++j) e.add_term(j, coefd(rng));
    if (e.terms().empty()) e.add_term(0, 1.0);
    m.add_constraint(std::move(e), static_cast<Sense>(sensed(rng)),
                     coefd(rng));
  }
  AffineExpr obj;
  for (int j = 0; j < nv; ++j) obj.add_term(j, coefd(rng));
  m.set_objective(obj);
  return m;
}

}  // namespace

TEST_CASE("random LPs: feasibility and first-order optimality hold") {
  std::mt19937_64 rng(2024);
  int optimal_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MilpModel m = random_lp(rng);
    const Solution s = solve_lp(m);
    if (s.status != SolveStatus::Optimal) continue;
    ++optimal_seen;
    CHECK(max_violation(m, s.values) <= 1e-6);
    // No single-variable move within bounds may improve the objective.
    const double h = 1e-5;
    for (const Variable& v : m.variables()) {
      const double c = m.objective().coefficient(v.id);
      if (c == 0.0) continue;
      for (const double dir : {+1.0, -1.0}) {
        if (c * dir >= 0.0) continue;  // not an improving direction
        std::vector<double> probe = s.values;
        probe[static_cast<size_t>(v.id)] += dir * h;
        if (probe[static_cast<size_t>(v.id)] < v.lower - 1e-12 ||
            probe[static_cast<size_t>(v.id)] > v.upper + 1e-12) {
          continue;
        }
        if (max_violation(m, probe) <= 1e-9) {
          // Feasible strictly improving move: optimality violated.
          CHECK_MESSAGE(false, "improving single-variable move found");
        }
      }
    }
  }
  CHECK(optimal_seen > 50);  // the generator must exercise the optimal path
}

TEST_CASE("solve is deterministic") {
  std::mt19937_64 rng(5);
  const MilpModel m = random_lp(rng);
  const Solution a = solve_lp(m);
  const Solution b = solve_lp(m);
  CHECK(a.status == b.status);
  if (a.status == SolveStatus::Optimal) {
    CHECK(a.objective == b.objective);
    CHECK(a.values == b.values);
  }
}
