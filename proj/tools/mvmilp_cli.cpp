// Command-line front end: solve trajectory and drill instances, run
// campaigns, and emit CSV/SVG artifacts.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mvmilp/branch_bound.hpp"
#include "mvmilp/instance_io.hpp"
#include "mvmilp/mps.hpp"
#include "mvmilp/report.hpp"
#include "mvmilp/sim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mvmilp;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTimeLimit = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitDuration = 6;

struct CommonArgs {
  std::string instance_path;
  std::string out_dir;
  double time_limit = 600.0;
  double gap = 1e-6;
  bool export_mps = false;
};

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MVMILP_OUT_DIR")) return env;
  return ".";
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return kExitOk;
    case SolveStatus::Infeasible:
      return kExitInfeasible;
    case SolveStatus::TimeLimit:
      return kExitTimeLimit;
    default:
      return kExitInternal;
  }
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

int run_traj(const CommonArgs& args, int samples_override, int max_refine) {
  io::TrajectorySetup setup =
      io::to_trajectory_problem(io::load_document(args.instance_path));
  if (samples_override > 0) setup.problem.samples = samples_override;
  if (max_refine >= 0) setup.max_refinements = max_refine;
  const fs::path out = resolve_out_dir(args.out_dir);
  fs::create_directories(out);

  MilpOptions opts;
  opts.time_limit_seconds = args.time_limit;
  opts.abs_gap = args.gap;

  const avoid::AvoidanceTimes initial = setup.initial_times;
  avoid::RefineResult res = avoid::refine_avoidance_times(
      setup.problem, setup.initial_times, setup.max_refinements,
      setup.inflation, opts);

  if (args.export_mps) {
    avoid::TrajectoryMilp milp =
        avoid::build_trajectory_milp(setup.problem, res.times, setup.inflation);
    io::write_text_file((out / "problem.mps").string(),
                        export_mps(milp.model, "TRAJ"));
  }

  std::ostringstream summary;
  summary << "status: " << to_string(res.solution.status) << "\n";
  summary << "objective: " << num(res.solution.objective) << "\n";
  summary << "refinement_iterations: " << std::max(res.refinements(), 0) << "\n";
  summary << "collision_free: " << (res.collision_free ? "yes" : "no") << "\n";
  summary << "avoidance_times: " << res.times.size() << "\n";
  summary << "lp_iterations: " << res.solution.stats.lp_iterations << "\n";
  summary << "nodes: " << res.solution.stats.nodes << "\n";
  if (res.trajectory.has_value()) {
    summary << "min_clearance: "
            << num(avoid::min_clearance(*res.trajectory,
                                        setup.problem.obstacles,
                                        setup.problem.samples))
            << "\n";
  }
  io::write_text_file((out / "summary.txt").string(), summary.str());

  if (res.solution.status != SolveStatus::Optimal) {
    std::cerr << "error: solve ended with status "
              << to_string(res.solution.status) << "\n";
    return status_exit_code(res.solution.status);
  }

  std::vector<double> added;
  for (double t : res.times.times()) {
    bool initial_time = false;
    for (double t0 : initial.times()) {
      if (std::abs(t - t0) < 1e-12) initial_time = true;
    }
    if (!initial_time) added.push_back(t);
  }
  io::write_text_file((out / "solution.csv").string(),
                      io::csv_trajectory(*res.trajectory));
  io::write_text_file(
      (out / "trajectory.svg").string(),
      io::svg_trajectory(*res.trajectory, setup.problem.obstacles,
                         initial.times(), added));
  std::cout << "objective " << num(res.solution.objective) << ", "
            << res.refinements() << " refinement iteration(s), "
            << (res.collision_free ? "collision-free" : "NOT collision-free")
            << "\n";
  if (!res.collision_free && !setup.problem.obstacles.empty()) {
    std::cerr << "error: no collision-free trajectory within the refinement "
                 "budget\n";
    return kExitInternal;
  }
  return kExitOk;
}

int run_drill(const CommonArgs& args, bool force) {
  drills::DrillInstance inst =
      io::to_drill_instance(io::load_document(args.instance_path));
  const fs::path out = resolve_out_dir(args.out_dir);
  fs::create_directories(out);

  const drills::DurationCheck dc = drills::duration_check(inst);
  if (!dc.ok && !force) {
    std::cerr << "error: attacker horizon too short (needs "
              << num(dc.bounds[static_cast<size_t>(dc.binding_attacker)])
              << ", attacker " << dc.binding_attacker + 1
              << "); pass --force to solve anyway\n";
    return kExitDuration;
  }

  drills::DrillMilp milp = drills::build_drill_milp(inst, /*skip=*/true);
  if (args.export_mps) {
    io::write_text_file((out / "problem.mps").string(),
                        export_mps(milp.model, "DRILL"));
  }

  MilpOptions opts;
  opts.time_limit_seconds = args.time_limit;
  opts.abs_gap = args.gap;
  const Solution sol = solve_milp(milp.model, opts);
  if (sol.status != SolveStatus::Optimal) {
    std::cerr << "error: solve ended with status " << to_string(sol.status)
              << "\n";
    return status_exit_code(sol.status);
  }

  const drills::DrillSolution ds = drills::extract_solution(inst, milp, sol);
  const sim::ValidationReport report = sim::validate(inst, ds);

  io::write_text_file((out / "defenders.csv").string(),
                      io::csv_drill_defenders(inst, ds));
  io::write_text_file((out / "attackers.csv").string(),
                      io::csv_drill_attackers(inst, ds));
  io::write_text_file((out / "indicators.csv").string(),
                      io::csv_drill_indicators(inst, ds));
  io::write_text_file((out / "field.svg").string(), io::svg_drill(inst, ds));
  if (inst.kind == drills::DrillKind::Drill2) {
    io::write_text_file((out / "distance.csv").string(),
                        io::csv_drill_distances(inst, ds));
  }
  const sim::SimTrace trace = sim::simulate(inst, ds.controls);
  io::write_text_file((out / "trace.csv").string(),
                      io::csv_sim_trace(inst, trace));

  std::ostringstream summary;
  summary << "status: " << to_string(sol.status) << "\n";
  summary << "objective: " << num(sol.objective) << "\n";
  summary << "zone_entries: " << num(ds.zone_entries) << "\n";
  summary << "nodes: " << sol.stats.nodes << "\n";
  summary << "lp_iterations: " << sol.stats.lp_iterations << "\n";
  summary << "wall_seconds: " << num(sol.stats.wall_seconds) << "\n";
  summary << "validation: " << (report.clean ? "clean" : "divergent") << "\n";
  summary << "boundary_ambiguous: " << report.ambiguous.size() << "\n";
  io::write_text_file((out / "summary.txt").string(), summary.str());

  if (!report.clean) {
    const sim::Divergence& d = report.divergences.front();
    std::cerr << "error: validation divergence at attacker " << d.attacker + 1
              << " step " << d.step << " field " << d.field << " (solver "
              << d.solver_value << ", simulator " << d.sim_value << ")\n";
    return kExitDivergence;
  }
  std::cout << "objective " << num(sol.objective) << ", zone entries "
            << num(ds.zone_entries) << ", validation clean ("
            << report.ambiguous.size() << " boundary-ambiguous)\n";
  return kExitOk;
}

int run_bench(const CommonArgs& args, std::uint64_t seed_override) {
  io::BenchSetup setup =
      io::to_bench_config(io::load_document(args.instance_path));
  if (seed_override != 0) setup.campaign.base.seed = seed_override;
  if (args.time_limit > 0.0) {
    setup.campaign.time_limit_seconds =
        std::min(setup.campaign.time_limit_seconds, args.time_limit);
  }
  const fs::path out = resolve_out_dir(args.out_dir);
  fs::create_directories(out);

  std::vector<bench::CampaignResult> results;
  std::string instances_csv;
  for (double fw : setup.fuel_weights) {
    bench::CampaignConfig cfg = setup.campaign;
    cfg.base.fuel_weight = fw;
    bench::CampaignResult r = bench::run_campaign(cfg);
    instances_csv += io::csv_bench_instances(r);
    results.push_back(std::move(r));
  }
  io::write_text_file((out / "instances.csv").string(), instances_csv);
  io::write_text_file((out / "summary.csv").string(),
                      io::csv_bench_summary(results));
  for (const bench::CampaignResult& r : results) {
    for (const bench::CellSummary& cell : r.cells) {
      std::cout << "fuel " << cell.fuel_weight << " N_A " << cell.attackers
                << ": solved " << cell.solved << "/" << cell.total << ", t50 "
                << cell.t50 << "s\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-vehicle strategy synthesis via MILP"};
  app.require_subcommand(1);

  CommonArgs targs, dargs, bargs;
  int samples = -1;
  int max_refine = -1;
  bool force = false;
  std::uint64_t seed = 0;

  CLI::App* traj = app.add_subcommand(
      "traj", "Minimum-effort trajectory with obstacle avoidance");
  traj->add_option("instance", targs.instance_path)->required();
  traj->add_option("--out", targs.out_dir, "Output directory");
  traj->add_option("--time-limit", targs.time_limit);
  traj->add_option("--gap", targs.gap);
  traj->add_option("--samples", samples, "Dense-check sample count");
  traj->add_option("--max-refine", max_refine);
  traj->add_flag("--export-mps", targs.export_mps);

  CLI::App* drill = app.add_subcommand("drill", "Solve a defensive drill");
  drill->add_option("instance", dargs.instance_path)->required();
  drill->add_option("--out", dargs.out_dir, "Output directory");
  drill->add_option("--time-limit", dargs.time_limit);
  drill->add_option("--gap", dargs.gap);
  drill->add_flag("--export-mps", dargs.export_mps);
  drill->add_flag("--force", force, "Solve despite a failing duration check");

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Random-instance complexity campaign");
  bench_cmd->add_option("config", bargs.instance_path)->required();
  bench_cmd->add_option("--out", bargs.out_dir, "Output directory");
  bench_cmd->add_option("--time-limit", bargs.time_limit);
  bench_cmd->add_option("--seed", seed);

  bargs.time_limit = 0.0;  // bench: only cap when the flag is given

  CLI11_PARSE(app, argc, argv);

  try {
    if (traj->parsed()) return run_traj(targs, samples, max_refine);
    if (drill->parsed()) return run_drill(dargs, force);
    if (bench_cmd->parsed()) return run_bench(bargs, seed);
  } catch (const mvmilp::io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
