#include "mvmilp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mvmilp::io {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// World-to-viewport mapping with a fixed 640x640 canvas and 5% padding.
class SvgCanvas {
 public:
  SvgCanvas(double min_x, double max_x, double min_y, double max_y) {
    const double span = std::max(std::max(max_x - min_x, max_y - min_y), 1e-6);
    const double pad = 0.05 * span;
    min_x_ = min_x - pad;
    min_y_ = min_y - pad;
    scale_ = size_ / (span + 2.0 * pad);
  }

  double x(double wx) const { return (wx - min_x_) * scale_; }
  double y(double wy) const { return size_ - (wy - min_y_) * scale_; }
  double len(double w) const { return w * scale_; }

  std::string header() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_
        << "\" height=\"" << size_ << "\" viewBox=\"0 0 " << size_ << " "
        << size_ << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out.str();
  }

 private:
  double size_ = 640.0;
  double min_x_ = 0.0, min_y_ = 0.0, scale_ = 1.0;
};

std::string svg_polyline(const SvgCanvas& c,
                         std::span<const std::array<double, 2>> pts,
                         const std::string& stroke, double width,
                         bool closed = false, const std::string& fill = "none") {
  std::ostringstream out;
  out << (closed ? "<polygon" : "<polyline") << " points=\"";
  for (const auto& p : pts) {
    out << num(c.x(p[0])) << "," << num(c.y(p[1])) << " ";
  }
  out << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
      << num(width) << "\"/>\n";
  return out.str();
}

std::string svg_cross(const SvgCanvas& c, double wx, double wy, double px,
                      const std::string& stroke) {
  const double x = c.x(wx);
  const double y = c.y(wy);
  std::ostringstream out;
  out << "<path d=\"M" << num(x - px) << " " << num(y - px) << " L"
      << num(x + px) << " " << num(y + px) << " M" << num(x - px) << " "
      << num(y + px) << " L" << num(x + px) << " " << num(y - px)
      << "\" stroke=\"" << stroke << "\" stroke-width=\"1.2\"/>\n";
  return out.str();
}

std::string svg_star(const SvgCanvas& c, double wx, double wy, double px,
                     const std::string& stroke) {
  const double x = c.x(wx);
  const double y = c.y(wy);
  std::ostringstream out;
  out << "<path d=\"M" << num(x - px) << " " << num(y) << " L" << num(x + px)
      << " " << num(y) << " M" << num(x) << " " << num(y - px) << " L" << num(x)
      << " " << num(y + px) << " M" << num(x - 0.7 * px) << " "
      << num(y - 0.7 * px) << " L" << num(x + 0.7 * px) << " "
      << num(y + 0.7 * px) << " M" << num(x - 0.7 * px) << " "
      << num(y + 0.7 * px) << " L" << num(x + 0.7 * px) << " "
      << num(y - 0.7 * px) << "\" stroke=\"" << stroke
      << "\" stroke-width=\"1\"/>\n";
  return out.str();
}

std::vector<std::array<double, 2>> sample_path(const dyn::Trajectory& traj,
                                               int samples = 256) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    const dyn::VehicleState s = traj.at(traj.horizon() * i / samples);
    pts.push_back({s.x, s.y});
  }
  return pts;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string csv_trajectory(const dyn::Trajectory& traj) {
  std::ostringstream out;
  out << "t,x,y,vx,vy,u_x,u_y\n";
  const dyn::TimeGrid& g = traj.grid();
  for (int k = 0; k <= g.num_steps(); ++k) {
    const dyn::VehicleState& s = traj.node_states()[static_cast<size_t>(k)];
    const double ux = k < g.num_steps() ? traj.controls()[static_cast<size_t>(k)][0] : 0.0;
    const double uy = k < g.num_steps() ? traj.controls()[static_cast<size_t>(k)][1] : 0.0;
    out << num(g.node_time(k)) << "," << num(s.x) << "," << num(s.y) << ","
        << num(s.vx) << "," << num(s.vy) << "," << num(ux) << "," << num(uy)
        << "\n";
  }
  return out.str();
}

std::string svg_trajectory(const dyn::Trajectory& traj,
                           std::span<const avoid::Obstacle> obstacles,
                           std::span<const double> avoidance_times,
                           std::span<const double> added_times) {
  const auto pts = sample_path(traj);
  double min_x = kInf, max_x = -kInf, min_y = kInf, max_y = -kInf;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p[0]);
    max_x = std::max(max_x, p[0]);
    min_y = std::min(min_y, p[1]);
    max_y = std::max(max_y, p[1]);
  }
  for (const avoid::Obstacle& o : obstacles) {
    for (const auto& s : o.center_samples) {
      min_x = std::min(min_x, s[1] - o.radius);
      max_x = std::max(max_x, s[1] + o.radius);
      min_y = std::min(min_y, s[2] - o.radius);
      max_y = std::max(max_y, s[2] + o.radius);
    }
  }
  SvgCanvas c(min_x, max_x, min_y, max_y);
  std::ostringstream out;
  out << c.header();
  for (const avoid::Obstacle& o : obstacles) {
    const auto [cx, cy] = o.center_at(0.0);
    out << "<circle cx=\"" << num(c.x(cx)) << "\" cy=\"" << num(c.y(cy))
        << "\" r=\"" << num(c.len(o.radius))
        << "\" fill=\"#cccccc\" stroke=\"#666666\"/>\n";
  }
  out << svg_polyline(c, pts, "#1f4e9c", 1.6);
  for (double t : avoidance_times) {
    const dyn::VehicleState s = traj.at(t);
    out << svg_cross(c, s.x, s.y, 4.0, "#b03030");
  }
  for (double t : added_times) {
    const dyn::VehicleState s = traj.at(t);
    const double x = c.x(s.x);
    const double y = c.y(s.y);
    out << "<path d=\"M" << num(x) << " " << num(y - 5) << " L" << num(x + 5)
        << " " << num(y) << " L" << num(x) << " " << num(y + 5) << " L"
        << num(x - 5) << " " << num(y)
        << " Z\" fill=\"none\" stroke=\"#208020\" stroke-width=\"1.2\"/>\n";
  }
  const dyn::VehicleState s0 = traj.node_states().front();
  const dyn::VehicleState sf = traj.node_states().back();
  out << "<circle cx=\"" << num(c.x(s0.x)) << "\" cy=\"" << num(c.y(s0.y))
      << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<rect x=\"" << num(c.x(sf.x) - 4) << "\" y=\"" << num(c.y(sf.y) - 4)
      << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string csv_drill_defenders(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol) {
  std::ostringstream out;
  out << "defender,k,t,x,y,vx,vy,u_x,u_y\n";
  const dyn::TimeGrid grid = inst.control_grid();
  for (size_t i = 0; i < sol.trajectories.size(); ++i) {
    const dyn::Trajectory& traj = sol.trajectories[i];
    for (int k = 0; k <= grid.num_steps(); ++k) {
      const dyn::VehicleState& s = traj.node_states()[static_cast<size_t>(k)];
      const double ux =
          k < grid.num_steps() ? traj.controls()[static_cast<size_t>(k)][0] : 0.0;
      const double uy =
          k < grid.num_steps() ? traj.controls()[static_cast<size_t>(k)][1] : 0.0;
      out << i + 1 << "," << k << "," << num(grid.node_time(k)) << ","
          << num(s.x) << "," << num(s.y) << "," << num(s.vx) << ","
          << num(s.vy) << "," << num(ux) << "," << num(uy) << "\n";
    }
  }
  return out.str();
}

std::string csv_drill_attackers(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol) {
  std::ostringstream out;
  out << "attacker,k,t,p,q,attack,retreat\n";
  const dyn::TimeGrid grid = inst.attacker_grid();
  for (size_t j = 0; j < sol.p.size(); ++j) {
    for (size_t k = 0; k < sol.p[j].size(); ++k) {
      out << j + 1 << "," << k << "," << num(grid.node_time(static_cast<int>(k)))
          << "," << num(sol.p[j][k]) << "," << num(sol.q[j][k]) << ","
          << sol.attack[j][k] << "," << sol.retreat[j][k] << "\n";
    }
  }
  return out.str();
}

std::string csv_drill_indicators(const drills::DrillInstance& inst,
                                 const drills::DrillSolution& sol) {
  const int nd = static_cast<int>(inst.defenders.size());
  std::ostringstream out;
  out << "attacker,k,t,gamma,delta,omega";
  for (int i = 1; i <= nd; ++i) out << ",delta_" << i;
  if (inst.kind == drills::DrillKind::Drill2) {
    for (int i = 1; i <= nd; ++i) out << ",omega_" << i;
  }
  out << "\n";
  const dyn::TimeGrid grid = inst.attacker_grid();
  for (size_t j = 0; j < sol.zone.size(); ++j) {
    for (size_t k = 0; k < sol.zone[j].size(); ++k) {
      out << j + 1 << "," << k << "," << num(grid.node_time(static_cast<int>(k)))
          << "," << sol.zone[j][k] << "," << sol.intercept_any[j][k] << ","
          << sol.warning_any[j][k];
      for (int i = 0; i < nd; ++i) out << "," << sol.intercept[i][j][k];
      if (inst.kind == drills::DrillKind::Drill2) {
        for (int i = 0; i < nd; ++i) out << "," << sol.warning[i][j][k];
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string csv_drill_distances(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol) {
  std::ostringstream out;
  out << "attacker,k,t,distance\n";
  const dyn::TimeGrid grid = inst.attacker_grid();
  for (size_t j = 0; j < sol.p.size(); ++j) {
    for (size_t k = 0; k < sol.p[j].size(); ++k) {
      out << j + 1 << "," << k << "," << num(grid.node_time(static_cast<int>(k)))
          << "," << num(std::hypot(sol.p[j][k], sol.q[j][k])) << "\n";
    }
  }
  return out.str();
}

std::string csv_sim_trace(const drills::DrillInstance& inst,
                          const sim::SimTrace& trace) {
  const int nd = static_cast<int>(inst.defenders.size());
  const int na = static_cast<int>(inst.attackers.size());
  std::ostringstream out;
  out << "k,t";
  for (int i = 1; i <= nd; ++i) out << ",def" << i << "_x,def" << i << "_y";
  for (int j = 1; j <= na; ++j) {
    out << ",att" << j << "_p,att" << j << "_q,att" << j << "_mode,att" << j
        << "_gamma,att" << j << "_delta,att" << j << "_omega";
  }
  out << "\n";
  const dyn::TimeGrid grid = inst.attacker_grid();
  const int steps = grid.num_steps();
  for (int k = 0; k <= steps; ++k) {
    out << k << "," << num(grid.node_time(k));
    for (int i = 0; i < nd; ++i) {
      const dyn::VehicleState& s = trace.defender_states[i][static_cast<size_t>(k)];
      out << "," << num(s.x) << "," << num(s.y);
    }
    for (int j = 0; j < na; ++j) {
      const sim::AttackerTrace& at = trace.attackers[static_cast<size_t>(j)];
      // mode: 1 attack, -1 retreat, 0 inactive
      const int mode = at.attack[static_cast<size_t>(k)] -
                       at.retreat[static_cast<size_t>(k)];
      out << "," << num(at.p[static_cast<size_t>(k)]) << ","
          << num(at.q[static_cast<size_t>(k)]) << "," << mode << ","
          << at.zone[static_cast<size_t>(k)] << ","
          << at.intercept_any[static_cast<size_t>(k)] << ","
          << at.warning_any[static_cast<size_t>(k)];
    }
    out << "\n";
  }
  return out.str();
}

std::string svg_drill(const drills::DrillInstance& inst,
                      const drills::DrillSolution& sol) {
  const drills::DrillGeometry& g = inst.geometry;
  double ext = g.zone_radius * 1.5;
  for (const auto& t : sol.trajectories) {
    for (const auto& s : t.node_states()) {
      ext = std::max({ext, std::abs(s.x), std::abs(s.y)});
    }
  }
  for (size_t j = 0; j < sol.p.size(); ++j) {
    for (size_t k = 0; k < sol.p[j].size(); ++k) {
      ext = std::max({ext, std::abs(sol.p[j][k]), std::abs(sol.q[j][k])});
    }
  }
  ext *= 1.1;
  SvgCanvas c(-ext, ext, -ext, ext);
  std::ostringstream out;
  out << c.header();

  const auto zone = drills::polygon_vertices(g.zone_radius, g.zone_sides);
  out << svg_polyline(c, zone, "#888888", 1.0, true, "#d8d8d8");

  const dyn::TimeGrid agrid = inst.attacker_grid();
  for (size_t i = 0; i < sol.trajectories.size(); ++i) {
    const dyn::Trajectory& traj = sol.trajectories[i];
    out << svg_polyline(c, sample_path(traj), "#1f4e9c", 1.6);
    for (int k = 0; k <= agrid.num_steps(); ++k) {
      const double t = std::min(agrid.node_time(k), traj.horizon());
      const dyn::VehicleState s = traj.at(t);
      const auto poly = drills::polygon_vertices(
          g.intercept_radius, g.intercept_sides, s.x, s.y);
      out << svg_polyline(c, poly, "#7a9ccf", 0.8, true);
    }
    for (double t : inst.zone_avoidance_times) {
      const dyn::VehicleState s = traj.at(std::min(t, traj.horizon()));
      out << svg_cross(c, s.x, s.y, 4.0, "#b03030");
    }
  }

  for (size_t j = 0; j < sol.p.size(); ++j) {
    for (size_t k = 0; k < sol.p[j].size(); ++k) {
      out << svg_star(c, sol.p[j][k], sol.q[j][k], 4.0, "#202020");
      if (inst.kind == drills::DrillKind::Drill2) {
        const auto poly = drills::polygon_vertices(
            g.effective_warning_radius(), g.warning_sides, sol.p[j][k],
            sol.q[j][k]);
        out << svg_polyline(c, poly, "#d0a040", 0.6, true);
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string csv_bench_instances(const bench::CampaignResult& result) {
  std::ostringstream out;
  out << "index,attackers,fuel_weight,status,objective,wall_seconds,nodes,"
         "lp_iterations,error\n";
  for (const bench::InstanceRecord& r : result.instances) {
    out << r.index << "," << r.attackers << "," << num(r.fuel_weight) << ","
        << to_string(r.status) << "," << num(r.objective) << ","
        << num(r.wall_seconds) << "," << r.nodes << "," << r.lp_iterations
        << "," << r.error << "\n";
  }
  return out.str();
}

std::string csv_bench_summary(std::span<const bench::CampaignResult> results) {
  std::ostringstream out;
  out << "record,fuel_weight,attackers,total,solved,t50,fit_c,fit_alpha\n";
  for (const bench::CampaignResult& r : results) {
    for (const bench::CellSummary& cell : r.cells) {
      out << "cell," << num(cell.fuel_weight) << "," << cell.attackers << ","
          << cell.total << "," << cell.solved << "," << num(cell.t50)
          << ",,\n";
    }
    if (r.fit.has_value()) {
      const double fw =
          r.cells.empty() ? 0.0 : r.cells.front().fuel_weight;
      out << "fit," << num(fw) << ",,,,," << num(r.fit->c) << ","
          << num(r.fit->alpha) << "\n";
    }
  }
  return out.str();
}

}  // namespace mvmilp::io
