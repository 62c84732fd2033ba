#include "mvmilp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "mvmilp/kernels.hpp"

namespace mvmilp {
namespace {

constexpr double kDirTol = 1e-11;     // direction entries below this are noise
constexpr double kPivotMin = 1e-9;    // smallest acceptable pivot magnitude
constexpr int kDegenTrip = 40;        // degenerate steps before Bland's rule
constexpr int kRecomputeEvery = 128;  // basic-value refresh cadence

enum class CStat : std::uint8_t { Basic, Lower, Upper, FreeZero };

}  // namespace

struct SimplexWorkspace::Impl {
  // Computational form: A x + I s = b with bounds on x and s. Slack bounds
  // encode the constraint sense. The initial basis is the slack identity.
  int m = 0;   // rows
  int ns = 0;  // structural columns (model variables)
  int n = 0;   // total columns = ns + m
  int K = 0;   // tableau width = n + 1 (last column holds B^-1 b)
  LpOptions opts;

  std::vector<std::vector<std::pair<int, double>>> cols;  // structural columns
  std::vector<double> b;
  std::vector<double> cost;  // structural costs (slacks cost 0)
  double obj_constant = 0.0;

  std::vector<double> model_lo, model_up;
  std::vector<double> lo, up;  // current bounds, all columns
  std::vector<double> xval;    // current values, all columns
  std::vector<CStat> stat;
  std::vector<int> basic;  // column id per row

  std::vector<double> D;  // m x K tableau, row-major
  std::vector<double> y;  // pricing duals
  std::vector<double> scratch;

  std::int64_t iters_last = 0;
  std::int64_t iters_total = 0;
  std::int64_t iter_budget = 0;
  bool bland = false;
  int degen_count = 0;
  int pivot_failures = 0;

  double* row(int i) { return D.data() + static_cast<size_t>(i) * K; }
  double at(int i, int j) const { return D[static_cast<size_t>(i) * K + j]; }

  Impl(const MilpModel& model, LpOptions o) : opts(o) {
    m = model.num_constraints();
    ns = model.num_variables();
    n = ns + m;
    K = n + 1;

    cols.assign(ns, {});
    b.resize(m);
    cost.assign(ns, 0.0);
    model_lo.resize(ns);
    model_up.resize(ns);
    lo.resize(n);
    up.resize(n);

    for (int j = 0; j < ns; ++j) {
      const Variable& v = model.variables()[j];
      model_lo[j] = v.lower;
      model_up[j] = v.upper;
    }
    for (const auto& [v, c] : model.objective().terms()) cost[v] = c;
    obj_constant = model.objective().constant();

    for (int i = 0; i < m; ++i) {
      const Constraint& con = model.constraints()[i];
      for (const auto& [v, c] : con.expr.terms()) cols[v].push_back({i, c});
      b[i] = con.rhs;
      const int sj = ns + i;
      switch (con.sense) {
        case Sense::LessEq:
          lo[sj] = 0.0;
          up[sj] = kInf;
          break;
        case Sense::GreaterEq:
          lo[sj] = -kInf;
          up[sj] = 0.0;
          break;
        case Sense::Equal:
          lo[sj] = 0.0;
          up[sj] = 0.0;
          break;
      }
    }
    reset_struct_bounds();

    iter_budget = opts.max_iterations > 0 ? opts.max_iterations
                                          : 20000 + 20LL * (m + ns);

    xval.assign(n, 0.0);
    stat.assign(n, CStat::Lower);
    basic.resize(m);
    reset_to_slack_basis();
  }

  void reset_struct_bounds() {
    for (int j = 0; j < ns; ++j) {
      lo[j] = model_lo[j];
      up[j] = model_up[j];
    }
  }

  void set_bounds(int j, double lower, double upper) {
    lo[j] = lower;
    up[j] = upper;
    snap_nonbasic(j);
  }

  // Keeps a nonbasic variable on a bound consistent with its status.
  void snap_nonbasic(int j) {
    if (stat[j] == CStat::Basic) return;
    if (stat[j] == CStat::Upper && std::isfinite(up[j])) {
      xval[j] = up[j];
    } else if (std::isfinite(lo[j])) {
      stat[j] = CStat::Lower;
      xval[j] = lo[j];
    } else if (std::isfinite(up[j])) {
      stat[j] = CStat::Upper;
      xval[j] = up[j];
    } else {
      stat[j] = CStat::FreeZero;
      xval[j] = 0.0;
    }
  }

  void reset_to_slack_basis() {
    D.assign(static_cast<size_t>(m) * K, 0.0);
    for (int i = 0; i < m; ++i) {
      double* r = row(i);
      r[ns + i] = 1.0;
      r[n] = b[i];
      basic[i] = ns + i;
    }
    for (int j = 0; j < ns; ++j) {
      for (const auto& [i, c] : cols[j]) D[static_cast<size_t>(i) * K + j] = c;
    }
    for (int j = 0; j < ns; ++j) {
      stat[j] = CStat::Lower;
      snap_nonbasic(j);
    }
    for (int i = 0; i < m; ++i) stat[ns + i] = CStat::Basic;
    recompute_basic_values();
  }

  void recompute_basic_values() {
    scratch.assign(m, 0.0);
    for (int i = 0; i < m; ++i) scratch[i] = at(i, n);
    for (int j = 0; j < n; ++j) {
      if (stat[j] == CStat::Basic) continue;
      const double v = xval[j];
      if (v == 0.0) continue;
      for (int i = 0; i < m; ++i) scratch[i] -= v * at(i, j);
    }
    for (int i = 0; i < m; ++i) xval[basic[i]] = scratch[i];
  }

  // y^T = cB^T B^-1, read off the slack block of the tableau.
  template <typename CostOfRow>
  void compute_duals(CostOfRow cost_of_row) {
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double c = cost_of_row(i);
      if (c != 0.0) kernels::axpy(y.data(), row(i) + ns, c, m);
    }
  }

  double priced_cost(int j, bool phase1) const {
    if (j >= ns) return -y[j - ns];
    double r = phase1 ? 0.0 : cost[j];
    for (const auto& [i, c] : cols[j]) r -= y[i] * c;
    return r;
  }

  struct Entering {
    int col = -1;
    int dir = 0;  // +1 increase, -1 decrease
  };

  Entering pick_entering(bool phase1) {
    Entering best;
    double best_score = opts.opt_tol;
    for (int j = 0; j < n; ++j) {
      if (stat[j] == CStat::Basic) continue;
      if (lo[j] == up[j]) continue;  // fixed
      const double r = priced_cost(j, phase1);
      int dir = 0;
      if ((stat[j] == CStat::Lower || stat[j] == CStat::FreeZero) &&
          r < -opts.opt_tol) {
        dir = +1;
      } else if ((stat[j] == CStat::Upper || stat[j] == CStat::FreeZero) &&
                 r > opts.opt_tol) {
        dir = -1;
      }
      if (dir == 0) continue;
      if (bland) return {j, dir};
      const double score = std::abs(r);
      if (score > best_score) {
        best_score = score;
        best = {j, dir};
      }
    }
    return best;
  }

  struct Ratio {
    double step = kInf;
    int leave_row = -1;  // -1: entering variable bound flip (or unbounded)
    double leave_at = 0.0;
    CStat leave_stat = CStat::Lower;
  };

  // In phase 1, basics violating a bound block only at that bound when moving
  // toward it (they become feasible there); feasible basics block as usual.
  Ratio ratio_test(const Entering& e, bool phase1) {
    const double s = static_cast<double>(e.dir);
    const double ftol = opts.feas_tol;

    double best_step = kInf;
    int best_row = -1;
    double best_bound = 0.0;
    CStat best_stat = CStat::Lower;
    double best_piv = 0.0;

    for (int i = 0; i < m; ++i) {
      const double wt = s * at(i, e.col);
      if (std::abs(wt) <= kDirTol) continue;
      const int bj = basic[i];
      const double xb = xval[bj];
      double bound;
      CStat reached;
      if (wt > 0.0) {  // basic value decreases
        if (phase1 && xb > up[bj] + ftol) {
          bound = up[bj];
          reached = CStat::Upper;
        } else if (phase1 && xb < lo[bj] - ftol) {
          continue;  // moving further out; the slope already accounts for it
        } else if (std::isfinite(lo[bj])) {
          bound = lo[bj];
          reached = CStat::Lower;
        } else {
          continue;
        }
      } else {  // basic value increases
        if (phase1 && xb < lo[bj] - ftol) {
          bound = lo[bj];
          reached = CStat::Lower;
        } else if (phase1 && xb > up[bj] + ftol) {
          continue;
        } else if (std::isfinite(up[bj])) {
          bound = up[bj];
          reached = CStat::Upper;
        } else {
          continue;
        }
      }
      const double step = std::max((xb - bound) / wt, 0.0);
      const double tie_hi = best_step + 1e-9 * best_step + 1e-12;
      if (step > tie_hi) continue;
      const double tie_lo = best_step - 1e-9 * best_step - 1e-12;
      bool take;
      if (step < tie_lo || best_row < 0) {
        take = true;
      } else if (bland) {
        take = bj < basic[best_row];
      } else {
        take = std::abs(wt) > best_piv;
      }
      if (take) {
        best_step = std::min(step, best_step);
        best_row = i;
        best_bound = bound;
        best_stat = reached;
        best_piv = std::abs(wt);
      }
    }

    // The entering variable's own opposite bound competes as a bound flip;
    // ties prefer the flip (no basis change).
    double span = (e.dir > 0) ? up[e.col] - xval[e.col] : xval[e.col] - lo[e.col];
    if (!std::isfinite(span)) span = kInf;
    span = std::max(span, 0.0);

    Ratio out;
    if (span <= best_step + 1e-9 * best_step + 1e-12) {
      out.step = span;  // flip, or unbounded when span is infinite
      out.leave_row = -1;
    } else {
      out.step = best_step;
      out.leave_row = best_row;
      out.leave_at = best_bound;
      out.leave_stat = best_stat;
    }
    return out;
  }

  // Moves the entering variable, updates basic values, pivots when a row
  // blocks. Returns false when the pivot element is numerically unusable.
  bool apply_step(const Entering& e, const Ratio& r) {
    const double s = static_cast<double>(e.dir);
    const double theta = r.step;
    if (theta > 0.0) {
      for (int i = 0; i < m; ++i) {
        const double wi = at(i, e.col);
        if (wi != 0.0) xval[basic[i]] -= s * theta * wi;
      }
      xval[e.col] += s * theta;
    }
    if (theta <= kDirTol) {
      if (++degen_count > kDegenTrip) bland = true;
    } else {
      degen_count = 0;
      bland = false;
    }
    if (r.leave_row < 0) {
      stat[e.col] = (e.dir > 0) ? CStat::Upper : CStat::Lower;
      xval[e.col] = (e.dir > 0) ? up[e.col] : lo[e.col];
      return true;
    }
    const int lr = r.leave_row;
    if (std::abs(at(lr, e.col)) < kPivotMin) return false;
    const int leaving = basic[lr];
    xval[leaving] = r.leave_at;
    stat[leaving] = r.leave_stat;
    pivot(lr, e.col);
    basic[lr] = e.col;
    stat[e.col] = CStat::Basic;
    pivot_failures = 0;
    return true;
  }

  void pivot(int r, int q) {
    double* pr = row(r);
    kernels::scal(pr, 1.0 / pr[q], K);
    pr[q] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double alpha = ri[q];
      if (std::abs(alpha) > 1e-14) {
        kernels::axpy(ri, pr, -alpha, K);
        ri[q] = 0.0;
      }
    }
  }

  double bound_violation_inf_norm() const {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const int j = basic[i];
      worst = std::max(worst, lo[j] - xval[j]);
      worst = std::max(worst, xval[j] - up[j]);
    }
    return worst;
  }

  // Shared phase driver; phase 1 prices bound violations, phase 2 the cost.
  LpOutcome run_phase(bool phase1) {
    int since_recompute = 0;
    while (true) {
      if (phase1 && bound_violation_inf_norm() <= opts.feas_tol) {
        return LpOutcome::Optimal;
      }
      ++iters_last;
      ++iters_total;
      if (iters_last > iter_budget) return LpOutcome::IterationLimit;

      if (phase1) {
        compute_duals([&](int i) -> double {
          const int j = basic[i];
          if (xval[j] < lo[j] - opts.feas_tol) return -1.0;
          if (xval[j] > up[j] + opts.feas_tol) return 1.0;
          return 0.0;
        });
      } else {
        compute_duals([&](int i) -> double {
          const int j = basic[i];
          return j < ns ? cost[j] : 0.0;
        });
      }

      const Entering e = pick_entering(phase1);
      if (e.col < 0) {
        return phase1 ? LpOutcome::Infeasible : LpOutcome::Optimal;
      }
      const Ratio r = ratio_test(e, phase1);
      if (!std::isfinite(r.step)) {
        // In phase 1 an improving direction always hits a violated bound, so
        // an unbounded ray here means numerical trouble.
        return phase1 ? LpOutcome::IterationLimit : LpOutcome::Unbounded;
      }
      if (!apply_step(e, r)) {
        if (++pivot_failures > 4) return LpOutcome::IterationLimit;
        if (pivot_failures > 2) bland = true;
        if (!refactorize()) reset_to_slack_basis();
        continue;
      }
      if (++since_recompute >= kRecomputeEvery) {
        recompute_basic_values();
        since_recompute = 0;
      }
    }
  }

  // Rebuilds the tableau from the current basis via an explicit inverse;
  // false if the basis matrix is numerically singular.
  bool refactorize() {
    if (m == 0) return true;
    std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
    std::vector<double> bm(static_cast<size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p) {
      const int j = basic[p];
      if (j >= ns) {
        bm[static_cast<size_t>(j - ns) * m + p] = 1.0;
      } else {
        for (const auto& [i, c] : cols[j]) bm[static_cast<size_t>(i) * m + p] = c;
      }
      inv[static_cast<size_t>(p) * m + p] = 1.0;
    }
    for (int c = 0; c < m; ++c) {
      int piv = c;
      double best = std::abs(bm[static_cast<size_t>(c) * m + c]);
      for (int i = c + 1; i < m; ++i) {
        const double v = std::abs(bm[static_cast<size_t>(i) * m + c]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) return false;
      if (piv != c) {
        for (int j = 0; j < m; ++j) {
          std::swap(bm[static_cast<size_t>(piv) * m + j],
                    bm[static_cast<size_t>(c) * m + j]);
          std::swap(inv[static_cast<size_t>(piv) * m + j],
                    inv[static_cast<size_t>(c) * m + j]);
        }
      }
      double* brow = &bm[static_cast<size_t>(c) * m];
      double* irow = &inv[static_cast<size_t>(c) * m];
      const double scale = 1.0 / brow[c];
      kernels::scal(brow, scale, m);
      kernels::scal(irow, scale, m);
      for (int i = 0; i < m; ++i) {
        if (i == c) continue;
        const double a = bm[static_cast<size_t>(i) * m + c];
        if (a != 0.0) {
          kernels::axpy(&bm[static_cast<size_t>(i) * m], brow, -a, m);
          kernels::axpy(&inv[static_cast<size_t>(i) * m], irow, -a, m);
        }
      }
    }
    std::vector<double> colbuf(m);
    for (int j = 0; j < ns; ++j) {
      std::fill(colbuf.begin(), colbuf.end(), 0.0);
      for (const auto& [r, c] : cols[j]) {
        for (int i = 0; i < m; ++i) {
          colbuf[i] += c * inv[static_cast<size_t>(i) * m + r];
        }
      }
      for (int i = 0; i < m; ++i) D[static_cast<size_t>(i) * K + j] = colbuf[i];
    }
    for (int i = 0; i < m; ++i) {
      double* ri = row(i);
      const double* ii = &inv[static_cast<size_t>(i) * m];
      std::copy(ii, ii + m, ri + ns);
      ri[n] = kernels::dot(ii, b.data(), m);
    }
    recompute_basic_values();
    return true;
  }

  double residual_inf_norm() const {
    std::vector<double> res(b);
    for (int j = 0; j < ns; ++j) {
      const double v = xval[j];
      if (v == 0.0) continue;
      for (const auto& [i, c] : cols[j]) res[i] -= c * v;
    }
    for (int i = 0; i < m; ++i) res[i] -= xval[ns + i];
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, std::abs(r));
    return worst;
  }

  LpOutcome solve() {
    iters_last = 0;
    bland = false;
    degen_count = 0;
    pivot_failures = 0;
    recompute_basic_values();
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    for (int attempt = 0;; ++attempt) {
      LpOutcome out = run_phase(/*phase1=*/true);
      if (out != LpOutcome::Optimal) return out;
      out = run_phase(/*phase1=*/false);
      if (out != LpOutcome::Optimal) return out;
      recompute_basic_values();
      const double tol = 10 * opts.feas_tol * scale;
      if (residual_inf_norm() <= tol && bound_violation_inf_norm() <= tol) {
        return LpOutcome::Optimal;
      }
      if (attempt >= 2) return LpOutcome::IterationLimit;
      if (!refactorize()) reset_to_slack_basis();
    }
  }

  double objective() const {
    double s = obj_constant;
    for (int j = 0; j < ns; ++j) {
      if (cost[j] != 0.0) s += cost[j] * xval[j];
    }
    return s;
  }
};

SimplexWorkspace::SimplexWorkspace(const MilpModel& model, LpOptions opts)
    : impl_(std::make_unique<Impl>(model, opts)) {}

SimplexWorkspace::~SimplexWorkspace() = default;

void SimplexWorkspace::set_bounds(VarId v, double lower, double upper) {
  impl_->set_bounds(v, lower, upper);
}

void SimplexWorkspace::reset_bounds() {
  impl_->reset_struct_bounds();
  for (int j = 0; j < impl_->ns; ++j) impl_->snap_nonbasic(j);
}

LpOutcome SimplexWorkspace::solve() { return impl_->solve(); }

double SimplexWorkspace::objective() const { return impl_->objective(); }

std::vector<double> SimplexWorkspace::variable_values() const {
  return {impl_->xval.begin(), impl_->xval.begin() + impl_->ns};
}

std::int64_t SimplexWorkspace::last_iterations() const {
  return impl_->iters_last;
}
std::int64_t SimplexWorkspace::total_iterations() const {
  return impl_->iters_total;
}

Solution solve_lp(const MilpModel& model, const LpOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SimplexWorkspace ws(model, opts);
  const LpOutcome out = ws.solve();
  Solution sol;
  sol.stats.lp_iterations = ws.total_iterations();
  sol.values = ws.variable_values();
  switch (out) {
    case LpOutcome::Optimal:
      sol.status = SolveStatus::Optimal;
      sol.objective = ws.objective();
      sol.best_bound = sol.objective;
      break;
    case LpOutcome::Infeasible:
      sol.status = SolveStatus::Infeasible;
      break;
    case LpOutcome::Unbounded:
      sol.status = SolveStatus::Unbounded;
      sol.objective = -kInf;
      break;
    case LpOutcome::IterationLimit:
      sol.status = SolveStatus::Error;
      break;
  }
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sol;
}

}  // namespace mvmilp
