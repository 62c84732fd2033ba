#pragma once

#include <span>
#include <string>

#include "mvmilp/avoidance.hpp"
#include "mvmilp/bench.hpp"
#include "mvmilp/drills.hpp"
#include "mvmilp/sim.hpp"

// Deterministic CSV and static-SVG emission for solved problems. All numbers
// are printed with %.9g so identical solutions produce identical bytes.
namespace mvmilp::io {

void write_text_file(const std::string& path, const std::string& content);

std::string csv_trajectory(const dyn::Trajectory& traj);

std::string svg_trajectory(const dyn::Trajectory& traj,
                           std::span<const avoid::Obstacle> obstacles,
                           std::span<const double> avoidance_times,
                           std::span<const double> added_times);

std::string csv_drill_defenders(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol);
std::string csv_drill_attackers(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol);
std::string csv_drill_indicators(const drills::DrillInstance& inst,
                                 const drills::DrillSolution& sol);
// Attacker distance from the zone center versus time (Drill 2 figure data).
std::string csv_drill_distances(const drills::DrillInstance& inst,
                                const drills::DrillSolution& sol);

std::string csv_sim_trace(const drills::DrillInstance& inst,
                          const sim::SimTrace& trace);

std::string svg_drill(const drills::DrillInstance& inst,
                      const drills::DrillSolution& sol);

std::string csv_bench_instances(const bench::CampaignResult& result);
std::string csv_bench_summary(std::span<const bench::CampaignResult> results);

}  // namespace mvmilp::io
