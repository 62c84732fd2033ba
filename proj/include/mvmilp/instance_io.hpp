#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvmilp/avoidance.hpp"
#include "mvmilp/bench.hpp"
#include "mvmilp/drills.hpp"

namespace mvmilp::io {

// Human-editable instance document: INI-style sections of key/value lines.
// Values are whitespace-separated tokens; '#' and ';' start comments. A
// repeated [obstacles] section starts a new obstacle. Unknown sections or
// keys are rejected with the offending dotted name (section.key).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Section {
  std::string name;
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
};

struct Document {
  std::vector<Section> sections;
  bool has(const std::string& section) const;
};

Document parse_document(const std::string& text);
Document load_document(const std::string& path);

// [vehicle] + [grids] + repeated [obstacles] + [encoding]
struct TrajectorySetup {
  avoid::TrajectoryProblem problem;
  avoid::AvoidanceTimes initial_times;
  double inflation = 0.05;
  int max_refinements = 10;
};
TrajectorySetup to_trajectory_problem(const Document& doc);

// [drill] + [grids] + [encoding]
drills::DrillInstance to_drill_instance(const Document& doc);

// [bench] + the drill shape keys
struct BenchSetup {
  bench::CampaignConfig campaign;
  std::vector<double> fuel_weights{0.0};
};
BenchSetup to_bench_config(const Document& doc);

}  // namespace mvmilp::io
