#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mvmilp/branch_bound.hpp"
#include "mvmilp/mps.hpp"

using namespace mvmilp;

TEST_CASE("binary forced up by a fractional lower bound") {
  // min gamma s.t. gamma >= 0.3, gamma binary
  MilpModel m;
  const VarId g = m.add_binary("gamma");
  m.add_constraint(AffineExpr::variable(g), Sense::GreaterEq, 0.3);
  m.set_objective(AffineExpr::variable(g));
  const Solution s = solve_milp(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.values[g] == doctest::Approx(1.0));
}

TEST_CASE("brute force with zero binaries equals the LP") {
  MilpModel m;
  const VarId x = m.add_continuous(0.0, 10.0, "x");
  m.add_constraint(AffineExpr::variable(x), Sense::GreaterEq, 2.5);
  m.set_objective(AffineExpr::variable(x));
  const Solution bf = brute_force_solve(m);
  const Solution lp = solve_lp(m);
  REQUIRE(bf.status == SolveStatus::Optimal);
  CHECK(bf.objective == doctest::Approx(lp.objective));
  CHECK(bf.stats.nodes == 1);
}

TEST_CASE("brute force enumerates both branches of one binary") {
  // min b + x s.t. x >= 1 - b: both assignments give objective 1.
  MilpModel m;
  const VarId b = m.add_binary("b");
  const VarId x = m.add_continuous(0.0, kInf, "x");
  AffineExpr row = AffineExpr::variable(x) + AffineExpr::variable(b);
  m.add_constraint(row, Sense::GreaterEq, 1.0);
  m.set_objective(AffineExpr::variable(b) + AffineExpr::variable(x));
  const Solution s = brute_force_solve(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.stats.nodes == 2);
}

TEST_CASE("brute force reports infeasibility over all assignments") {
  MilpModel m;
  const VarId b = m.add_binary("b");
  const VarId x = m.add_continuous(0.0, 1.0, "x");
  AffineExpr row = AffineExpr::variable(x) + AffineExpr::variable(b);
  m.add_constraint(row, Sense::GreaterEq, 5.0);
  m.set_objective(AffineExpr::variable(x));
  CHECK(brute_force_solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("brute force refuses more than 20 binaries") {
  MilpModel m;
  for (int i = 0; i < 21; ++i) m.add_binary();
  m.set_objective(AffineExpr::variable(0));
  CHECK_THROWS_AS(brute_force_solve(m), std::invalid_argument);
}

namespace {

MilpModel random_milp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nbd(0, 10);
  std::uniform_int_distribution<int> ncd(0, 10);
  std::uniform_int_distribution<int> rowd(1, 20);
  std::uniform_int_distribution<int> coefd(-5, 5);
  std::uniform_int_distribution<int> sensed(0, 2);
  std::uniform_real_distribution<double> rhsd(-8.0, 8.0);
  MilpModel m;
  const int nb = nbd(rng);
  const int nc = ncd(rng);
  if (nb + nc == 0) {
    m.add_binary();
  }
  for (int i = 0; i < nb; ++i) m.add_binary();
  for (int i = 0; i < nc; ++i) m.add_continuous(-10.0, 10.0);
  const int nv = m.num_variables();
  const int rows = rowd(rng);
  for (int i = 0; i < rows; ++i) {
    AffineExpr e;
    for (int j = 0; j < nv; ++j) {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.4) {
        e.add_term(j, coefd(rng));
      }
    }
    if (e.terms().empty()) e.add_term(0, 1.0);
    m.add_constraint(std::move(e), static_cast<Sense>(sensed(rng)), rhsd(rng));
  }
  AffineExpr obj;
  for (int j = 0; j < nv; ++j) obj.add_term(j, coefd(rng));
  m.set_objective(obj);
  return m;
}

}  // namespace

TEST_CASE("solve_milp matches the brute-force oracle on 100 random models") {
  std::mt19937_64 rng(42);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const MilpModel m = random_milp(rng);
    MilpOptions opts;
    opts.abs_gap = 1e-9;
    const Solution bb = solve_milp(m, opts);
    const Solution bf = brute_force_solve(m);
    REQUIRE(bb.status == bf.status);
    if (bb.status == SolveStatus::Optimal) {
      ++optimal;
      CHECK(std::abs(bb.objective - bf.objective) <= 1e-6);
      CHECK(max_violation(m, bb.values) <= 1e-6);
      CHECK(max_integrality_gap(m, bb.values) <= 1e-6);
    }
  }
  CHECK(optimal >= 20);
}

TEST_CASE("determinism: identical models yield identical searches") {
  std::mt19937_64 rng(99);
  const MilpModel m = random_milp(rng);
  const Solution a = solve_milp(m);
  const Solution b = solve_milp(m);
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("zero time limit reports TimeLimit with a bound") {
  MilpModel m;
  const VarId b = m.add_binary("b");
  m.add_constraint(AffineExpr::variable(b), Sense::GreaterEq, 0.3);
  m.set_objective(AffineExpr::variable(b));
  MilpOptions opts;
  opts.time_limit_seconds = 0.0;
  const Solution s = solve_milp(m, opts);
  CHECK(s.status == SolveStatus::TimeLimit);
}

TEST_CASE("MPS export: empty model yields a valid skeleton") {
  MilpModel m;
  const std::string mps = export_mps(m);
  CHECK(mps.find("NAME") != std::string::npos);
  CHECK(mps.find("ROWS") != std::string::npos);
  CHECK(mps.find("COLUMNS") != std::string::npos);
  CHECK(mps.find("RHS") != std::string::npos);
  CHECK(mps.find("BOUNDS") != std::string::npos);
  CHECK(mps.find("ENDATA") != std::string::npos);
}

TEST_CASE("MPS export: binary gets a BV bound row, names are kept or mapped") {
  MilpModel m;
  const VarId g = m.add_binary("gamma");
  (void)g;
  m.add_continuous(-1.0, 1.0, "this_name_is_far_too_long");
  m.add_continuous(0.0, kInf, "u_x_0");
  AffineExpr row = AffineExpr::variable(0) + AffineExpr::variable(2);
  m.add_constraint(row, Sense::LessEq, 1.0);
  m.set_objective(AffineExpr::variable(2));
  const std::string mps = export_mps(m);
  CHECK(mps.find(" BV BND       gamma") != std::string::npos);
  CHECK(mps.find("C0000002") != std::string::npos);  // fallback name
  CHECK(mps.find("u_x_0") != std::string::npos);
  // Deterministic: exporting twice gives identical bytes.
  CHECK(export_mps(m) == mps);
}
