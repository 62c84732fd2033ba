#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mvmilp/logic.hpp"

using namespace mvmilp;
using logic::BoolExpr;

namespace {

MilpModel binaries(int n) {
  MilpModel m;
  for (int i = 0; i < n; ++i) m.add_binary("p" + std::to_string(i));
  return m;
}

// Truth-table comparison of an expression and its CNF over all assignments.
bool cnf_preserves_truth(const BoolExpr& e, int nvars) {
  const std::vector<logic::Clause> cnf = logic::to_cnf(e);
  for (std::uint32_t mask = 0; mask < (1u << nvars); ++mask) {
    const auto value = [&](VarId v) { return ((mask >> v) & 1u) != 0; };
    bool clauses_true = true;
    for (const logic::Clause& c : cnf) {
      bool any = false;
      for (const logic::Literal& l : c.literals) {
        if (value(l.var) == l.positive) any = true;
      }
      if (!any) {
        clauses_true = false;
        break;
      }
    }
    if (clauses_true != e.evaluate(value)) return false;
  }
  return true;
}

BoolExpr random_expr(std::mt19937_64& rng, int nvars, int depth) {
  std::uniform_int_distribution<int> vard(0, nvars - 1);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 5);
  switch (pick(rng)) {
    case 1:
      return BoolExpr::lnot(random_expr(rng, nvars, depth - 1));
    case 2:
      return BoolExpr::land({random_expr(rng, nvars, depth - 1),
                             random_expr(rng, nvars, depth - 1)});
    case 3:
      return BoolExpr::lor({random_expr(rng, nvars, depth - 1),
                            random_expr(rng, nvars, depth - 1)});
    case 4:
      return BoolExpr::implies(random_expr(rng, nvars, depth - 1),
                               random_expr(rng, nvars, depth - 1));
    case 5:
      return BoolExpr::iff(random_expr(rng, nvars, depth - 1),
                           random_expr(rng, nvars, depth - 1));
    default:
      return BoolExpr::lit(vard(rng), rng() & 1);
  }
}

}  // namespace

TEST_CASE("worked CNF example keeps its three clauses") {
  // ((p1 or p2) and (not p3 or p2) and (p4 or p5 or not p6))
  const BoolExpr e = BoolExpr::land(
      {BoolExpr::lor({BoolExpr::lit(1), BoolExpr::lit(2)}),
       BoolExpr::lor({BoolExpr::lit(3, false), BoolExpr::lit(2)}),
       BoolExpr::lor(
           {BoolExpr::lit(4), BoolExpr::lit(5), BoolExpr::lit(6, false)})});
  const auto cnf = logic::to_cnf(e);
  CHECK(cnf.size() == 3);
  CHECK(cnf_preserves_truth(e, 7));
}

TEST_CASE("single literal is already CNF") {
  const auto cnf = logic::to_cnf(BoolExpr::lit(0));
  REQUIRE(cnf.size() == 1);
  REQUIRE(cnf[0].literals.size() == 1);
  CHECK(cnf[0].literals[0].var == 0);
  CHECK(cnf[0].literals[0].positive);
}

TEST_CASE("iff with conjunction agrees with exhaustive enumeration") {
  const BoolExpr e = BoolExpr::iff(
      BoolExpr::lit(0), BoolExpr::land({BoolExpr::lit(1), BoolExpr::lit(2)}));
  CHECK(cnf_preserves_truth(e, 3));
}

TEST_CASE("random expressions over up to 8 variables keep their truth table") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int nvars = 1 + static_cast<int>(rng() % 8);
    const BoolExpr e = random_expr(rng, nvars, 4);
    CHECK(cnf_preserves_truth(e, nvars));
  }
}

TEST_CASE("clause inequalities: (not p3 or p2) becomes (1-p3) + p2 >= 1") {
  MilpModel m = binaries(4);
  logic::Clause c{{{2, true}, {3, false}}};
  const auto cons = logic::clauses_to_inequalities(std::span(&c, 1), m);
  REQUIRE(cons.size() == 1);
  CHECK(cons[0].sense == Sense::GreaterEq);
  CHECK(cons[0].rhs == doctest::Approx(0.0));  // 1 - #neg
  CHECK(cons[0].expr.coefficient(2) == doctest::Approx(1.0));
  CHECK(cons[0].expr.coefficient(3) == doctest::Approx(-1.0));
}

TEST_CASE("unit clause forces its variable") {
  MilpModel m = binaries(1);
  logic::Clause c{{{0, true}}};
  const auto cons = logic::clauses_to_inequalities(std::span(&c, 1), m);
  std::vector<double> v{0.0};
  CHECK(cons[0].violation(v) > 0.5);
  v[0] = 1.0;
  CHECK(cons[0].violation(v) <= 0.0);
}

TEST_CASE("clause encoding feasibility equals satisfaction on the worked set") {
  MilpModel m = binaries(7);
  const BoolExpr e = BoolExpr::land(
      {BoolExpr::lor({BoolExpr::lit(1), BoolExpr::lit(2)}),
       BoolExpr::lor({BoolExpr::lit(3, false), BoolExpr::lit(2)}),
       BoolExpr::lor(
           {BoolExpr::lit(4), BoolExpr::lit(5), BoolExpr::lit(6, false)})});
  const auto cons = logic::clauses_to_inequalities(logic::to_cnf(e), m);
  const auto report = logic::verify_encoding(e, cons);
  CHECK(report.clean());
  CHECK(report.assignments_checked == 64);  // p1..p6
}

TEST_CASE("clause encoding rejects non-binary variables") {
  MilpModel m;
  m.add_continuous(0.0, 1.0, "x");
  logic::Clause c{{{0, true}}};
  CHECK_THROWS_AS(logic::clauses_to_inequalities(std::span(&c, 1), m),
                  std::invalid_argument);
}

TEST_CASE("halfplane indicator: point inside forces g = 1") {
  // Point (0,0), halfplane x <= 2 (a Defense-Zone row with R_dz = 2).
  const auto cons = logic::halfplane_indicator(
      0, AffineExpr(0.0), AffineExpr(0.0), {1.0, 0.0, 2.0}, {100.0, 1e-4});
  std::vector<double> v{1.0};
  CHECK(cons[0].violation(v) <= 1e-12);
  CHECK(cons[1].violation(v) <= 1e-12);
  v[0] = 0.0;
  const bool g0_feasible =
      cons[0].violation(v) <= 1e-12 && cons[1].violation(v) <= 1e-12;
  CHECK_FALSE(g0_feasible);
}

TEST_CASE("halfplane indicator: point outside forces g = 0") {
  const auto cons = logic::halfplane_indicator(
      0, AffineExpr(5.0), AffineExpr(0.0), {1.0, 0.0, 2.0}, {100.0, 1e-4});
  std::vector<double> v{0.0};
  CHECK(cons[0].violation(v) <= 1e-12);
  CHECK(cons[1].violation(v) <= 1e-12);
  v[0] = 1.0;
  const bool g1_feasible =
      cons[0].violation(v) <= 1e-12 && cons[1].violation(v) <= 1e-12;
  CHECK_FALSE(g1_feasible);
}

TEST_CASE("halfplane indicator boundary: only g = 1 survives the eps margin") {
  const auto cons = logic::halfplane_indicator(
      0, AffineExpr(2.0), AffineExpr(0.0), {1.0, 0.0, 2.0}, {100.0, 1e-4});
  std::vector<double> v{1.0};
  CHECK(cons[0].violation(v) <= 1e-12);
  CHECK(cons[1].violation(v) <= 1e-12);
  v[0] = 0.0;
  CHECK(cons[1].violation(v) > 0.0);  // lhs >= c + eps fails at lhs = c
}

TEST_CASE("halfplane indicator validates parameters") {
  CHECK_THROWS_AS(
      logic::halfplane_indicator(0, AffineExpr(0.0), AffineExpr(0.0),
                                 {1.0, 0.0, 2.0}, {-1.0, 1e-4}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      logic::halfplane_indicator(0, AffineExpr(0.0), AffineExpr(0.0),
                                 {0.0, 0.0, 2.0}, {10.0, 1e-4}),
      std::invalid_argument);
}

TEST_CASE("conjunction indicator matches the AND table for 1..6 parts") {
  for (int parts = 1; parts <= 6; ++parts) {
    std::vector<VarId> ids;
    for (int i = 1; i <= parts; ++i) ids.push_back(i);
    const auto cons = logic::conjunction_indicator(0, ids);
    std::vector<BoolExpr> lits;
    for (VarId v : ids) lits.push_back(BoolExpr::lit(v));
    const BoolExpr e = BoolExpr::iff(BoolExpr::lit(0), BoolExpr::land(lits));
    const auto report = logic::verify_encoding(e, cons);
    CHECK(report.clean());
    CHECK(report.assignments_checked == (1 << (parts + 1)));
  }
  CHECK_THROWS_AS(logic::conjunction_indicator(0, {}), std::invalid_argument);
}

namespace {

// The four-inequality Drill 1 machine: variables a, gamma, delta, a_next.
std::vector<Constraint> drill1_rows() {
  const VarId a = 0, gam = 1, del = 2, an = 3;
  std::vector<Constraint> rows;
  AffineExpr r1 = AffineExpr::variable(an) + AffineExpr::variable(del);
  rows.emplace_back(std::move(r1), Sense::LessEq, 1.0);
  AffineExpr r2 = AffineExpr::variable(an) - AffineExpr::variable(a);
  rows.emplace_back(std::move(r2), Sense::LessEq, 0.0);
  AffineExpr r3 = AffineExpr::variable(an) + AffineExpr::variable(gam);
  rows.emplace_back(std::move(r3), Sense::LessEq, 1.0);
  AffineExpr r4 = AffineExpr::variable(a);
  r4.add_term(del, -1.0);
  r4.add_term(gam, -1.0);
  r4.add_term(an, -1.0);
  rows.emplace_back(std::move(r4), Sense::LessEq, 0.0);
  return rows;
}

BoolExpr drill1_machine() {
  const VarId a = 0, gam = 1, del = 2, an = 3;
  return BoolExpr::iff(BoolExpr::lit(an),
                       BoolExpr::land({BoolExpr::lit(a),
                                       BoolExpr::lit(gam, false),
                                       BoolExpr::lit(del, false)}));
}

}  // namespace

TEST_CASE("Drill 1 machine equals its four inequalities over 2^4") {
  const auto rows = drill1_rows();
  const auto report = logic::verify_encoding(drill1_machine(), rows);
  CHECK(report.clean());
  CHECK(report.assignments_checked == 16);
}

TEST_CASE("a corrupted constraint set is reported") {
  auto rows = drill1_rows();
  rows[0].rhs = 2.0;  // deactivate the interception cut
  const auto report = logic::verify_encoding(drill1_machine(), rows);
  CHECK_FALSE(report.clean());
  CHECK(report.disagreements.size() > 0);
}

namespace {

// Drill 2: vars a1, a2, gamma, delta, omega, a1_next, a2_next.
std::vector<Constraint> drill2_rows() {
  const VarId a1 = 0, a2 = 1, gam = 2, del = 3, om = 4, b1 = 5, b2 = 6;
  const auto row = [](std::initializer_list<std::pair<VarId, double>> terms,
                      Sense s, double rhs) {
    AffineExpr e;
    for (const auto& [v, c] : terms) e.add_term(v, c);
    return Constraint(std::move(e), s, rhs);
  };
  return {
      row({{b1, 1.}, {a1, -1.}, {a2, 1.}, {gam, 1.}, {del, 1.}, {om, 1.}},
          Sense::GreaterEq, 0.0),
      row({{b1, 1.}, {a1, 1.}, {a2, -1.}, {gam, 1.}, {del, 1.}, {om, 1.}},
          Sense::GreaterEq, 0.0),
      row({{b2, 1.}, {a1, 1.}, {a2, -1.}, {gam, 1.}, {del, 1.}, {om, -1.}},
          Sense::GreaterEq, -1.0),
      row({{b2, 1.}, {a1, -1.}, {a2, 1.}, {gam, 1.}, {del, 1.}, {om, -1.}},
          Sense::GreaterEq, -1.0),
      row({{b1, 1.}, {a1, 1.}, {a2, 1.}}, Sense::LessEq, 2.0),
      row({{b1, 1.}, {a1, -1.}, {a2, -1.}}, Sense::LessEq, 0.0),
      row({{b1, 1.}, {gam, 1.}}, Sense::LessEq, 1.0),
      row({{b1, 1.}, {del, 1.}}, Sense::LessEq, 1.0),
      row({{b1, 1.}, {om, 1.}}, Sense::LessEq, 1.0),
      row({{b2, 1.}, {a1, -1.}, {a2, -1.}}, Sense::LessEq, 0.0),
      row({{b2, 1.}, {a1, 1.}, {a2, 1.}}, Sense::LessEq, 2.0),
      row({{b2, 1.}, {gam, 1.}}, Sense::LessEq, 1.0),
      row({{b2, 1.}, {del, 1.}}, Sense::LessEq, 1.0),
      row({{b2, 1.}, {om, -1.}}, Sense::LessEq, 0.0),
  };
}

}  // namespace

TEST_CASE("Drill 2 machine equals its fourteen inequalities") {
  const VarId a1 = 0, a2 = 1, gam = 2, del = 3, om = 4, b1 = 5, b2 = 6;
  const BoolExpr active = BoolExpr::lor(
      {BoolExpr::land({BoolExpr::lit(a1), BoolExpr::lit(a2, false)}),
       BoolExpr::land({BoolExpr::lit(a1, false), BoolExpr::lit(a2)})});
  const BoolExpr clean =
      BoolExpr::land({BoolExpr::lit(gam, false), BoolExpr::lit(del, false)});
  const BoolExpr next1 = BoolExpr::iff(
      BoolExpr::lit(b1),
      BoolExpr::land({active, clean, BoolExpr::lit(om, false)}));
  const BoolExpr next2 = BoolExpr::iff(
      BoolExpr::lit(b2), BoolExpr::land({active, clean, BoolExpr::lit(om)}));
  const BoolExpr machine = BoolExpr::land({next1, next2});

  // Restricted to reachable inputs a1 + a2 <= 1.
  const BoolExpr exclusion =
      BoolExpr::lnot(BoolExpr::land({BoolExpr::lit(a1), BoolExpr::lit(a2)}));
  const auto rows = drill2_rows();
  const auto report = logic::verify_encoding(machine, rows, &exclusion);
  CHECK(report.clean());
  CHECK(report.assignments_checked == 96);  // 2^7 minus a1 = a2 = 1 inputs
}

TEST_CASE("verify_encoding refuses oversized enumerations") {
  std::vector<BoolExpr> lits;
  for (int i = 0; i < 21; ++i) lits.push_back(BoolExpr::lit(i));
  const BoolExpr big = BoolExpr::land(lits);
  CHECK_THROWS_AS(logic::verify_encoding(big, {}), std::invalid_argument);
}
