#include "mvmilp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvmilp {

void AffineExpr::add_term(VarId v, double coef) {
  if (coef == 0.0) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const std::pair<VarId, double>& t, VarId id) { return t.first < id; });
  if (it != terms_.end() && it->first == v) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  } else {
    terms_.insert(it, {v, coef});
  }
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& rhs) {
  for (const auto& [v, c] : rhs.terms_) add_term(v, c);
  constant_ += rhs.constant_;
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& rhs) {
  for (const auto& [v, c] : rhs.terms_) add_term(v, -c);
  constant_ -= rhs.constant_;
  return *this;
}

AffineExpr& AffineExpr::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto& [v, c] : terms_) c *= s;
  constant_ *= s;
  return *this;
}

double AffineExpr::coefficient(VarId v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const std::pair<VarId, double>& t, VarId id) { return t.first < id; });
  return (it != terms_.end() && it->first == v) ? it->second : 0.0;
}

double AffineExpr::evaluate(std::span<const double> values) const {
  double s = constant_;
  for (const auto& [v, c] : terms_) s += c * values[static_cast<size_t>(v)];
  return s;
}

AffineExpr operator+(AffineExpr lhs, const AffineExpr& rhs) {
  lhs += rhs;
  return lhs;
}
AffineExpr operator-(AffineExpr lhs, const AffineExpr& rhs) {
  lhs -= rhs;
  return lhs;
}
AffineExpr operator*(AffineExpr e, double s) {
  e *= s;
  return e;
}
AffineExpr operator*(double s, AffineExpr e) {
  e *= s;
  return e;
}

Constraint::Constraint(AffineExpr e, Sense s, double r)
    : expr(std::move(e)), sense(s), rhs(r - expr.constant()) {
  expr.set_constant(0.0);
  if (!std::isfinite(rhs)) {
    throw std::invalid_argument("constraint right-hand side must be finite");
  }
}

double Constraint::violation(std::span<const double> values) const {
  const double lhs = expr.evaluate(values);
  switch (sense) {
    case Sense::LessEq:
      return lhs - rhs;
    case Sense::GreaterEq:
      return rhs - lhs;
    case Sense::Equal:
      return std::abs(lhs - rhs);
  }
  return 0.0;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::TimeLimit:
      return "time_limit";
    case SolveStatus::Error:
      return "error";
  }
  return "unknown";
}

VarId MilpModel::add_variable(VarKind kind, double lower, double upper,
                              std::string name) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("variable bounds invalid: lower > upper");
  }
  if (kind == VarKind::Binary && (lower != 0.0 || upper != 1.0)) {
    throw std::invalid_argument("binary variable bounds must be [0, 1]");
  }
  const VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back(Variable{id, kind, lower, upper, std::move(name)});
  if (kind == VarKind::Binary) ++num_binary_;
  return id;
}

void MilpModel::check_ids(const AffineExpr& e) const {
  for (const auto& [v, c] : e.terms()) {
    (void)c;
    if (v < 0 || v >= static_cast<VarId>(vars_.size())) {
      throw std::invalid_argument("expression references unknown variable id " +
                                  std::to_string(v));
    }
  }
}

void MilpModel::add_constraint(Constraint c) {
  check_ids(c.expr);
  cons_.push_back(std::move(c));
}

void MilpModel::set_objective(AffineExpr obj) {
  check_ids(obj);
  objective_ = std::move(obj);
}

std::vector<VarId> MilpModel::binary_ids() const {
  std::vector<VarId> ids;
  ids.reserve(static_cast<size_t>(num_binary_));
  for (const Variable& v : vars_) {
    if (v.kind == VarKind::Binary) ids.push_back(v.id);
  }
  return ids;
}

double max_violation(const MilpModel& model, std::span<const double> values) {
  double worst = 0.0;
  for (const Constraint& c : model.constraints()) {
    worst = std::max(worst, c.violation(values));
  }
  for (const Variable& v : model.variables()) {
    const double x = values[static_cast<size_t>(v.id)];
    worst = std::max(worst, v.lower - x);
    worst = std::max(worst, x - v.upper);
  }
  return worst;
}

std::pair<double, double> expr_bounds(const AffineExpr& e,
                                      const MilpModel& model) {
  double lo = e.constant();
  double hi = e.constant();
  for (const auto& [v, c] : e.terms()) {
    const Variable& var = model.variable(v);
    if (c > 0.0) {
      lo += c * var.lower;
      hi += c * var.upper;
    } else {
      lo += c * var.upper;
      hi += c * var.lower;
    }
  }
  return {lo, hi};
}

double max_integrality_gap(const MilpModel& model,
                           std::span<const double> values) {
  double worst = 0.0;
  for (const Variable& v : model.variables()) {
    if (v.kind != VarKind::Binary) continue;
    const double x = values[static_cast<size_t>(v.id)];
    worst = std::max(worst, std::min(std::abs(x), std::abs(x - 1.0)));
  }
  return worst;
}

}  // namespace mvmilp
