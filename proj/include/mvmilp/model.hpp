#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mvmilp {

using VarId = std::int32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };

struct Variable {
  VarId id = -1;
  VarKind kind = VarKind::Continuous;
  double lower = -kInf;
  double upper = kInf;
  std::string name;
};

// Linear expression sum coef_i * x_i + constant. Terms are kept sorted by
// variable id with coefficients merged; exact-zero coefficients are dropped.
class AffineExpr {
 public:
  AffineExpr() = default;
  explicit AffineExpr(double constant) : constant_(constant) {}

  static AffineExpr variable(VarId v, double coef = 1.0) {
    AffineExpr e;
    e.add_term(v, coef);
    return e;
  }

  void add_term(VarId v, double coef);
  void add_constant(double c) { constant_ += c; }
  void set_constant(double c) { constant_ = c; }

  AffineExpr& operator+=(const AffineExpr& rhs);
  AffineExpr& operator-=(const AffineExpr& rhs);
  AffineExpr& operator*=(double s);

  std::span<const std::pair<VarId, double>> terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  double coefficient(VarId v) const;

  // Evaluates with values indexed by variable id.
  double evaluate(std::span<const double> values) const;

 private:
  std::vector<std::pair<VarId, double>> terms_;
  double constant_ = 0.0;
};

AffineExpr operator+(AffineExpr lhs, const AffineExpr& rhs);
AffineExpr operator-(AffineExpr lhs, const AffineExpr& rhs);
AffineExpr operator*(AffineExpr e, double s);
AffineExpr operator*(double s, AffineExpr e);

enum class Sense { LessEq, GreaterEq, Equal };

// expr (sense) rhs. The expression's constant is folded into the right-hand
// side at construction so that stored constraints have constant-free lhs.
struct Constraint {
  AffineExpr expr;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;

  Constraint() = default;
  Constraint(AffineExpr e, Sense s, double r);

  // Signed violation of the constraint at the given point (<= 0 when
  // satisfied exactly; positive amounts are infeasibilities).
  double violation(std::span<const double> values) const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, Error };

const char* to_string(SolveStatus s);

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> values;  // indexed by variable id
  double objective = 0.0;
  double best_bound = -kInf;  // valid lower bound on the optimum
  SolveStats stats;
};

class MilpModel {
 public:
  VarId add_variable(VarKind kind, double lower, double upper,
                     std::string name = {});
  VarId add_continuous(double lower, double upper, std::string name = {}) {
    return add_variable(VarKind::Continuous, lower, upper, std::move(name));
  }
  VarId add_binary(std::string name = {}) {
    return add_variable(VarKind::Binary, 0.0, 1.0, std::move(name));
  }

  void add_constraint(Constraint c);
  void add_constraint(AffineExpr expr, Sense sense, double rhs) {
    add_constraint(Constraint(std::move(expr), sense, rhs));
  }
  void add_constraints(std::span<const Constraint> cs) {
    for (const Constraint& c : cs) add_constraint(c);
  }

  // Objective is always minimized.
  void set_objective(AffineExpr obj);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const AffineExpr& objective() const { return objective_; }
  const Variable& variable(VarId v) const { return vars_.at(v); }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  int num_binaries() const { return num_binary_; }
  int num_continuous() const { return num_variables() - num_binary_; }
  std::vector<VarId> binary_ids() const;

 private:
  void check_ids(const AffineExpr& e) const;

  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  AffineExpr objective_;
  int num_binary_ = 0;
};

// Largest constraint violation at the point, together with bound violations.
double max_violation(const MilpModel& model, std::span<const double> values);

// Interval range of an expression over the variable boxes.
std::pair<double, double> expr_bounds(const AffineExpr& e,
                                      const MilpModel& model);

// Largest distance of any binary variable from {0, 1}.
double max_integrality_gap(const MilpModel& model,
                           std::span<const double> values);

}  // namespace mvmilp
