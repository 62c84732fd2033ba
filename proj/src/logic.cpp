#include "mvmilp/logic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace mvmilp::logic {

BoolExpr BoolExpr::lit(VarId v, bool positive) {
  BoolExpr e;
  e.kind_ = Kind::Literal;
  e.var_ = v;
  e.positive_ = positive;
  return e;
}

BoolExpr BoolExpr::lnot(BoolExpr a) {
  BoolExpr e;
  e.kind_ = Kind::Not;
  e.kids_.push_back(std::move(a));
  return e;
}

BoolExpr BoolExpr::land(std::vector<BoolExpr> kids) {
  if (kids.empty()) throw std::invalid_argument("land: empty conjunction");
  BoolExpr e;
  e.kind_ = Kind::And;
  e.kids_ = std::move(kids);
  return e;
}

BoolExpr BoolExpr::lor(std::vector<BoolExpr> kids) {
  if (kids.empty()) throw std::invalid_argument("lor: empty disjunction");
  BoolExpr e;
  e.kind_ = Kind::Or;
  e.kids_ = std::move(kids);
  return e;
}

BoolExpr BoolExpr::implies(BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind_ = Kind::Implies;
  e.kids_.push_back(std::move(a));
  e.kids_.push_back(std::move(b));
  return e;
}

BoolExpr BoolExpr::iff(BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind_ = Kind::Iff;
  e.kids_.push_back(std::move(a));
  e.kids_.push_back(std::move(b));
  return e;
}

void BoolExpr::collect_vars(std::vector<VarId>& out) const {
  if (kind_ == Kind::Literal) {
    out.push_back(var_);
    return;
  }
  for (const BoolExpr& k : kids_) k.collect_vars(out);
}

namespace {

// Negation-normal form with only Literal/And/Or nodes.
BoolExpr to_nnf(const BoolExpr& e, bool negate) {
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::Literal:
      return BoolExpr::lit(e.var(), negate ? !e.positive() : e.positive());
    case K::Not:
      return to_nnf(e.children()[0], !negate);
    case K::And:
    case K::Or: {
      std::vector<BoolExpr> kids;
      kids.reserve(e.children().size());
      for (const BoolExpr& k : e.children()) kids.push_back(to_nnf(k, negate));
      const bool make_and = (e.kind() == K::And) != negate;
      return make_and ? BoolExpr::land(std::move(kids))
                      : BoolExpr::lor(std::move(kids));
    }
    case K::Implies: {
      // a -> b == !a or b
      std::vector<BoolExpr> kids;
      kids.push_back(to_nnf(e.children()[0], !negate));
      kids.push_back(to_nnf(e.children()[1], negate));
      return negate ? BoolExpr::land(std::move(kids))
                    : BoolExpr::lor(std::move(kids));
    }
    case K::Iff: {
      const BoolExpr& a = e.children()[0];
      const BoolExpr& b = e.children()[1];
      BoolExpr both = BoolExpr::land({a, b});
      BoolExpr neither = BoolExpr::land({BoolExpr::lnot(a), BoolExpr::lnot(b)});
      BoolExpr expanded = BoolExpr::lor({std::move(both), std::move(neither)});
      return to_nnf(expanded, negate);
    }
  }
  throw std::logic_error("to_nnf: unreachable");
}

// Normalizes literals of one clause; empty result means tautology.
bool normalize_clause(std::vector<Literal>& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].var == lits[i - 1].var) return false;  // p or not p
  }
  return true;
}

std::string key_of(const BoolExpr& e) {
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::Literal:
      return (e.positive() ? "+" : "-") + std::to_string(e.var());
    case K::And:
    case K::Or: {
      std::string s = e.kind() == K::And ? "&(" : "|(";
      for (const BoolExpr& k : e.children()) s += key_of(k) + ",";
      return s + ")";
    }
    default:
      throw std::logic_error("key_of: expression not in NNF");
  }
}

class CnfBuilder {
 public:
  std::vector<Clause> run(const BoolExpr& nnf) {
    std::vector<Clause> out = build(nnf);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  // Structural sharing: repeated subtrees are converted once.
  std::map<std::string, std::vector<Clause>> memo_;

  std::vector<Clause> build(const BoolExpr& e) {
    const std::string key = key_of(e);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
    std::vector<Clause> result;
    using K = BoolExpr::Kind;
    switch (e.kind()) {
      case K::Literal:
        result.push_back(Clause{{Literal{e.var(), e.positive()}}});
        break;
      case K::And:
        for (const BoolExpr& k : e.children()) {
          std::vector<Clause> sub = build(k);
          result.insert(result.end(), sub.begin(), sub.end());
        }
        break;
      case K::Or: {
        // Distribute: cross-merge the child clause sets.
        std::vector<Clause> acc{Clause{}};
        for (const BoolExpr& k : e.children()) {
          std::vector<Clause> sub = build(k);
          std::vector<Clause> next;
          next.reserve(acc.size() * sub.size());
          for (const Clause& a : acc) {
            for (const Clause& s : sub) {
              std::vector<Literal> lits = a.literals;
              lits.insert(lits.end(), s.literals.begin(), s.literals.end());
              if (normalize_clause(lits)) next.push_back(Clause{std::move(lits)});
            }
          }
          acc = std::move(next);
        }
        result = std::move(acc);
        break;
      }
      default:
        throw std::logic_error("CnfBuilder: expression not in NNF");
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    memo_.emplace(key, result);
    return result;
  }
};

}  // namespace

std::vector<Clause> to_cnf(const BoolExpr& expr) {
  return CnfBuilder{}.run(to_nnf(expr, false));
}

std::vector<Constraint> clauses_to_inequalities(std::span<const Clause> clauses,
                                                const MilpModel& model) {
  std::vector<Constraint> out;
  out.reserve(clauses.size());
  for (const Clause& cl : clauses) {
    if (cl.literals.empty()) {
      throw std::invalid_argument("clauses_to_inequalities: empty clause");
    }
    AffineExpr lhs;
    int negatives = 0;
    for (const Literal& l : cl.literals) {
      if (model.variable(l.var).kind != VarKind::Binary) {
        throw std::invalid_argument(
            "clauses_to_inequalities: variable " +
            std::to_string(l.var) + " is not binary");
      }
      lhs.add_term(l.var, l.positive ? 1.0 : -1.0);
      if (!l.positive) ++negatives;
    }
    out.emplace_back(std::move(lhs), Sense::GreaterEq, 1.0 - negatives);
  }
  return out;
}

std::array<Constraint, 2> halfplane_indicator(VarId g, const AffineExpr& x,
                                              const AffineExpr& y,
                                              const Halfplane& hp,
                                              const BigMParams& m) {
  if (m.H <= 0.0 || m.eps <= 0.0) {
    throw std::invalid_argument("halfplane_indicator: H and eps must be > 0");
  }
  if (hp.a == 0.0 && hp.b == 0.0) {
    throw std::invalid_argument("halfplane_indicator: degenerate halfplane");
  }
  AffineExpr lhs = hp.a * x + hp.b * y;
  AffineExpr upper = lhs;
  upper.add_term(g, m.H);
  AffineExpr lower = std::move(lhs);
  lower.add_term(g, m.H + m.eps);
  return {Constraint(std::move(upper), Sense::LessEq, hp.c + m.H),
          Constraint(std::move(lower), Sense::GreaterEq, hp.c + m.eps)};
}

std::vector<Constraint> conjunction_indicator(VarId gamma,
                                              std::span<const VarId> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("conjunction_indicator: empty part list");
  }
  std::vector<Constraint> out;
  out.reserve(parts.size() + 1);
  for (VarId p : parts) {
    AffineExpr e = AffineExpr::variable(p) - AffineExpr::variable(gamma);
    out.emplace_back(std::move(e), Sense::GreaterEq, 0.0);
  }
  AffineExpr tail = AffineExpr::variable(gamma);
  for (VarId p : parts) tail.add_term(p, -1.0);
  out.emplace_back(std::move(tail), Sense::GreaterEq,
                   1.0 - static_cast<double>(parts.size()));
  return out;
}

EncodingReport verify_encoding(const BoolExpr& expr,
                               std::span<const Constraint> constraints,
                               const BoolExpr* assumption) {
  EncodingReport report;
  std::vector<VarId> vars;
  expr.collect_vars(vars);
  if (assumption != nullptr) assumption->collect_vars(vars);
  for (const Constraint& c : constraints) {
    for (const auto& [v, coef] : c.expr.terms()) {
      (void)coef;
      vars.push_back(v);
    }
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 20) {
    throw std::invalid_argument("verify_encoding: more than 20 variables");
  }
  report.vars = vars;

  const int nv = static_cast<int>(vars.size());
  std::vector<double> values;
  VarId max_id = -1;
  for (VarId v : vars) max_id = std::max(max_id, v);
  values.assign(static_cast<size_t>(max_id + 1), 0.0);

  for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
    const auto value_of = [&](VarId v) {
      const auto it = std::lower_bound(vars.begin(), vars.end(), v);
      return ((mask >> (it - vars.begin())) & 1u) != 0;
    };
    if (assumption != nullptr && !assumption->evaluate(value_of)) continue;
    ++report.assignments_checked;
    for (int i = 0; i < nv; ++i) {
      values[static_cast<size_t>(vars[i])] = (mask >> i) & 1u ? 1.0 : 0.0;
    }
    bool feasible = true;
    for (const Constraint& c : constraints) {
      if (c.violation(values) > 1e-9) {
        feasible = false;
        break;
      }
    }
    const bool truth = expr.evaluate(value_of);
    if (truth != feasible) {
      report.disagreements.push_back({mask, truth, feasible});
    }
  }
  return report;
}

}  // namespace mvmilp::logic
