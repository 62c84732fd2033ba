#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mvmilp/model.hpp"

namespace mvmilp::logic {

// Propositional expression over binary decision variables.
class BoolExpr {
 public:
  enum class Kind { Literal, Not, And, Or, Implies, Iff };

  static BoolExpr lit(VarId v, bool positive = true);
  static BoolExpr lnot(BoolExpr e);
  static BoolExpr land(std::vector<BoolExpr> kids);
  static BoolExpr lor(std::vector<BoolExpr> kids);
  static BoolExpr implies(BoolExpr a, BoolExpr b);
  static BoolExpr iff(BoolExpr a, BoolExpr b);

  Kind kind() const { return kind_; }
  VarId var() const { return var_; }
  bool positive() const { return positive_; }
  const std::vector<BoolExpr>& children() const { return kids_; }

  template <typename Lookup>  // Lookup: VarId -> bool
  bool evaluate(Lookup value) const {
    switch (kind_) {
      case Kind::Literal:
        return value(var_) == positive_;
      case Kind::Not:
        return !kids_[0].evaluate(value);
      case Kind::And:
        for (const BoolExpr& k : kids_) {
          if (!k.evaluate(value)) return false;
        }
        return true;
      case Kind::Or:
        for (const BoolExpr& k : kids_) {
          if (k.evaluate(value)) return true;
        }
        return false;
      case Kind::Implies:
        return !kids_[0].evaluate(value) || kids_[1].evaluate(value);
      case Kind::Iff:
        return kids_[0].evaluate(value) == kids_[1].evaluate(value);
    }
    return false;
  }

  void collect_vars(std::vector<VarId>& out) const;

 private:
  Kind kind_ = Kind::Literal;
  VarId var_ = -1;
  bool positive_ = true;
  std::vector<BoolExpr> kids_;
};

struct Literal {
  VarId var;
  bool positive;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Disjunction of literals: sorted by variable id, no duplicate variable.
struct Clause {
  std::vector<Literal> literals;
  friend auto operator<=>(const Clause&, const Clause&) = default;
};

// Converts to an equivalent clause set by desugaring, negation pushing, and
// OR-over-AND distribution (no auxiliary variables). Tautological clauses are
// dropped and duplicate clauses merged.
std::vector<Clause> to_cnf(const BoolExpr& expr);

// One inequality per clause: sum(positive) + sum(1 - negative) >= 1. All
// referenced variables must be Binary in the model.
std::vector<Constraint> clauses_to_inequalities(std::span<const Clause> clauses,
                                                const MilpModel& model);

// a*x + b*y <= c.
struct Halfplane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct BigMParams {
  double H = 0.0;
  double eps = 1e-4;
};

// Big-M constant for a field of the given radius per the operating-box rule.
inline double default_big_m(double field_radius, double region_radius) {
  return 2.0 * field_radius + region_radius + 1.0;
}

// Indicator pair tying binary g to membership of the affine point (x, y) in
// the halfplane:
//   a x + b y <= c + H (1 - g)
//   a x + b y >= c + eps - (H + eps) g
// Outside the eps band this enforces g = 1 iff a x + b y <= c. Points with
// c < a x + b y < c + eps admit no feasible g: the band is excluded.
std::array<Constraint, 2> halfplane_indicator(VarId g, const AffineExpr& x,
                                              const AffineExpr& y,
                                              const Halfplane& hp,
                                              const BigMParams& m);

// gamma = AND(parts): part - gamma >= 0 per part, sum(1 - part) + gamma >= 1.
std::vector<Constraint> conjunction_indicator(VarId gamma,
                                              std::span<const VarId> parts);

struct EncodingDisagreement {
  std::uint32_t assignment_mask;  // bit i = value of the i-th variable
  bool expr_truth;
  bool constraints_feasible;
};

struct EncodingReport {
  std::vector<VarId> vars;  // ascending; mask bit order
  std::int64_t assignments_checked = 0;
  std::vector<EncodingDisagreement> disagreements;
  bool clean() const { return disagreements.empty(); }
};

// Exhaustively compares logical truth of expr with feasibility of the
// constraint set over every assignment of the referenced binaries (at most
// 20). Assignments violating the optional assumption are skipped.
EncodingReport verify_encoding(const BoolExpr& expr,
                               std::span<const Constraint> constraints,
                               const BoolExpr* assumption = nullptr);

}  // namespace mvmilp::logic
