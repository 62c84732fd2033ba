#include "mvmilp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvmilp::bench {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double in_interval(const Interval& iv, double u) {
  return iv.lo + (iv.hi - iv.lo) * u;
}

}  // namespace

double uniform_draw(std::uint64_t seed, std::uint64_t index,
                    const std::string& field_tag) {
  const std::uint64_t h =
      splitmix64(splitmix64(splitmix64(seed) ^ index) ^ fnv1a(field_tag));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Interval GeneratorConfig::effective_defender_radius() const {
  if (defender_radius.lo != 0.0 || defender_radius.hi != 0.0) {
    return defender_radius;
  }
  const double s = std::numbers::sqrt2 * zone_radius;
  return {s, 2.0 * s};
}

drills::DrillInstance random_instance(const GeneratorConfig& cfg,
                                      std::uint64_t index) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  drills::DrillInstance inst;
  inst.kind = cfg.kind;
  inst.fuel_weight = cfg.fuel_weight;
  inst.geometry.zone_radius = cfg.zone_radius;
  inst.geometry.zone_sides = cfg.zone_sides;
  inst.geometry.intercept_radius = cfg.intercept_radius;
  inst.geometry.intercept_sides = cfg.intercept_sides;
  inst.geometry.warning_radius = cfg.warning_radius;
  inst.geometry.warning_sides = cfg.warning_sides;
  inst.geometry.field_radius = cfg.field_radius;
  inst.encoding.indicator_eps = cfg.indicator_eps;
  inst.encoding.control_sides = cfg.control_sides;
  inst.encoding.avoid_sides = cfg.avoid_sides;

  double longest_bound = 0.0;
  for (int j = 0; j < cfg.num_attackers; ++j) {
    const std::string tag = "[" + std::to_string(j) + "]";
    const double r =
        in_interval(cfg.attacker_radius, uniform_draw(cfg.seed, index, "r_a" + tag));
    const double th = two_pi * uniform_draw(cfg.seed, index, "theta_a" + tag);
    const double v =
        in_interval(cfg.attacker_speed, uniform_draw(cfg.seed, index, "v_a" + tag));
    drills::AttackerSpec a;
    a.p_s = r * std::cos(th);
    a.q_s = r * std::sin(th);
    const double norm = std::hypot(a.p_s, a.q_s);
    const double sign = cfg.inbound ? -1.0 : 1.0;
    a.v_p = sign * v * a.p_s / norm;
    a.v_q = sign * v * a.q_s / norm;
    inst.attackers.push_back(a);
    longest_bound = std::max(longest_bound, norm / std::abs(v));
  }

  for (int i = 0; i < cfg.num_defenders; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    const double r = in_interval(cfg.effective_defender_radius(),
                                 uniform_draw(cfg.seed, index, "r_d" + tag));
    const double th = two_pi * uniform_draw(cfg.seed, index, "theta_d" + tag);
    const double v =
        in_interval(cfg.defender_speed, uniform_draw(cfg.seed, index, "v_d" + tag));
    const double thv = two_pi * uniform_draw(cfg.seed, index, "theta_v" + tag);
    drills::DefenderSpec d;
    d.start.x = r * std::cos(th);
    d.start.y = r * std::sin(th);
    d.start.vx = v * std::cos(thv);
    d.start.vy = v * std::sin(thv);
    inst.defenders.push_back(d);
  }

  const double horizon = cfg.horizon_slack * longest_bound;
  inst.attacker_steps.assign(static_cast<size_t>(cfg.attacker_steps),
                             horizon / cfg.attacker_steps);
  inst.control_steps.assign(static_cast<size_t>(cfg.control_steps),
                            horizon / cfg.control_steps);
  for (int k = 1; k <= cfg.avoid_steps; ++k) {
    inst.zone_avoidance_times.push_back(horizon * k / cfg.avoid_steps);
  }
  return inst;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  CampaignResult result;
  for (int n_a : config.attacker_counts) {
    CellSummary cell;
    cell.attackers = n_a;
    cell.fuel_weight = config.base.fuel_weight;
    cell.total = config.instances_per_cell;
    for (int r = 0; r < config.instances_per_cell; ++r) {
      GeneratorConfig gen = config.base;
      gen.num_attackers = n_a;
      InstanceRecord rec;
      rec.index = static_cast<std::uint64_t>(r);
      rec.attackers = n_a;
      rec.fuel_weight = gen.fuel_weight;
      try {
        const drills::DrillInstance inst =
            random_instance(gen, static_cast<std::uint64_t>(r));
        drills::DrillMilp milp = drills::build_drill_milp(inst);
        MilpOptions opts;
        opts.time_limit_seconds = config.time_limit_seconds;
        opts.abs_gap = config.abs_gap;
        const auto t0 = std::chrono::steady_clock::now();
        const Solution sol = solve_milp(milp.model, opts);
        rec.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        rec.status = sol.status;
        rec.objective = sol.objective;
        rec.nodes = sol.stats.nodes;
        rec.lp_iterations = sol.stats.lp_iterations;
        if (sol.status == SolveStatus::Optimal) {
          cell.solve_times.push_back(rec.wall_seconds);
          ++cell.solved;
        }
      } catch (const std::exception& e) {
        rec.status = SolveStatus::Error;
        rec.error = e.what();
      }
      result.instances.push_back(std::move(rec));
    }
    std::sort(cell.solve_times.begin(), cell.solve_times.end());
    const int need = (cell.total + 1) / 2;  // smallest count covering 50%
    if (cell.solved >= need && need >= 1) {
      cell.t50 = cell.solve_times[static_cast<size_t>(need - 1)];
    } else {
      cell.t50 = std::nan("");
    }
    result.cells.push_back(std::move(cell));
  }

  std::vector<std::pair<double, double>> pts;
  for (const CellSummary& c : result.cells) {
    if (std::isfinite(c.t50) && c.t50 > 0.0) {
      pts.push_back({static_cast<double>(c.attackers), c.t50});
    }
  }
  if (pts.size() >= 2) result.fit = fit_exponential(pts);
  return result;
}

double CellSummary::fraction_solved_by(double t) const {
  const auto it =
      std::upper_bound(solve_times.begin(), solve_times.end(), t);
  return total == 0 ? 0.0
                    : static_cast<double>(it - solve_times.begin()) / total;
}

ExpFit fit_exponential(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit_exponential: need at least 2 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, t] : points) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("fit_exponential: nonpositive time");
    }
    const double y = std::log(t);
    sx += n;
    sy += y;
    sxx += n * n;
    sxy += n * y;
  }
  const double count = static_cast<double>(points.size());
  const double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw std::invalid_argument("fit_exponential: degenerate abscissae");
  }
  ExpFit fit;
  fit.alpha = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.alpha * sx) / count;
  fit.c = std::exp(intercept);
  for (const auto& [n, t] : points) {
    fit.residuals.push_back(std::log(t) - (intercept + fit.alpha * n));
  }
  return fit;
}

}  // namespace mvmilp::bench
