#include "mvmilp/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mvmilp::io {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

double to_double(const std::string& key, const std::string& tok) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad numeric value for " + key + ": '" + tok + "'");
  }
}

int to_int(const std::string& key, const std::string& tok) {
  const double v = to_double(key, tok);
  if (v != std::floor(v)) {
    throw ParseError("expected integer for " + key + ": '" + tok + "'");
  }
  return static_cast<int>(v);
}

// Typed access over one section with whitelist enforcement.
class Keys {
 public:
  Keys(const Section& s, std::set<std::string> allowed)
      : section_(s), allowed_(std::move(allowed)) {
    for (const auto& [k, v] : s.entries) {
      (void)v;
      if (allowed_.find(k) == allowed_.end()) {
        throw ParseError("unknown key " + s.name + "." + k);
      }
    }
  }

  bool has(const std::string& key) const {
    return find(key) != nullptr;
  }

  const std::vector<std::string>* find(const std::string& key) const {
    const std::vector<std::string>* last = nullptr;
    for (const auto& [k, v] : section_.entries) {
      if (k == key) last = &v;
    }
    return last;
  }

  std::vector<std::vector<std::string>> all(const std::string& key) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& [k, v] : section_.entries) {
      if (k == key) out.push_back(v);
    }
    return out;
  }

  double number(const std::string& key) const {
    const auto* v = find(key);
    if (v == nullptr || v->size() != 1) {
      throw ParseError("missing scalar key " + dotted(key));
    }
    return to_double(dotted(key), (*v)[0]);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const auto* v = find(key);
    if (v == nullptr || v->size() != 1) {
      throw ParseError("missing scalar key " + dotted(key));
    }
    return to_int(dotted(key), (*v)[0]);
  }

  int integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string word(const std::string& key) const {
    const auto* v = find(key);
    if (v == nullptr || v->size() != 1) {
      throw ParseError("missing key " + dotted(key));
    }
    return (*v)[0];
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto* v = find(key);
    if (v == nullptr) throw ParseError("missing key " + dotted(key));
    std::vector<double> out;
    for (const std::string& t : *v) out.push_back(to_double(dotted(key), t));
    return out;
  }

  std::vector<double> numbers_or(const std::string& key,
                                 std::vector<double> fallback) const {
    return has(key) ? numbers(key) : std::move(fallback);
  }

  std::string dotted(const std::string& key) const {
    return section_.name + "." + key;
  }

 private:
  const Section& section_;
  std::set<std::string> allowed_;
};

dyn::VehicleState state_of(const std::string& key,
                           const std::vector<std::string>& toks) {
  if (toks.size() != 4) {
    throw ParseError(key + " needs 4 values: x y vx vy");
  }
  return {to_double(key, toks[0]), to_double(key, toks[1]),
          to_double(key, toks[2]), to_double(key, toks[3])};
}

const Section* single_section(const Document& doc, const std::string& name,
                              bool required) {
  const Section* found = nullptr;
  for (const Section& s : doc.sections) {
    if (s.name != name) continue;
    if (found != nullptr) throw ParseError("duplicate section [" + name + "]");
    found = &s;
  }
  if (found == nullptr && required) {
    throw ParseError("missing section [" + name + "]");
  }
  return found;
}

const std::set<std::string> kKnownSections = {
    "vehicle", "obstacles", "drill", "encoding", "grids", "bench"};

}  // namespace

bool Document::has(const std::string& section) const {
  for (const Section& s : sections) {
    if (s.name == section) return true;
  }
  return false;
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(lineno) +
                         ": malformed section header");
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (kKnownSections.find(name) == kKnownSections.end()) {
        throw ParseError("unknown section [" + name + "]");
      }
      doc.sections.push_back(Section{name, {}});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || current == nullptr) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected key = value inside a section");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(lineno) + ": empty key");
    }
    current->entries.push_back({key, tokens_of(line.substr(eq + 1))});
  }
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

namespace {

std::vector<double> grid_steps_from(const Keys& grids, const std::string& count_key,
                                    const std::string& step_key, double horizon) {
  const int n = grids.integer(count_key);
  if (n <= 0) throw ParseError(grids.dotted(count_key) + " must be positive");
  if (grids.has(step_key)) {
    return std::vector<double>(static_cast<size_t>(n), grids.number(step_key));
  }
  if (horizon <= 0.0) {
    throw ParseError("need grids.horizon or " + grids.dotted(step_key));
  }
  return std::vector<double>(static_cast<size_t>(n), horizon / n);
}

std::vector<double> avoidance_times_from(const Keys& grids, double horizon) {
  if (grids.has("avoid_times")) return grids.numbers("avoid_times");
  const int n = grids.integer_or("avoid_count", 0);
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(horizon * k / n);
  return out;
}

avoid::Obstacle obstacle_of(const Section& s) {
  Keys keys(s, {"radius", "sides", "center", "sample", "interpolation"});
  avoid::Obstacle o;
  o.radius = keys.number("radius");
  o.sides = keys.integer("sides");
  if (keys.has("center")) {
    const std::vector<double> c = keys.numbers("center");
    if (c.size() != 2) throw ParseError("obstacles.center needs x y");
    o.center_samples = {{0.0, c[0], c[1]}};
    o.interp = avoid::Obstacle::Interp::Hold;
  } else {
    for (const auto& toks : keys.all("sample")) {
      if (toks.size() != 3) throw ParseError("obstacles.sample needs t x y");
      o.center_samples.push_back({to_double("obstacles.sample", toks[0]),
                                  to_double("obstacles.sample", toks[1]),
                                  to_double("obstacles.sample", toks[2])});
    }
    const std::string mode =
        keys.has("interpolation") ? keys.word("interpolation") : "linear";
    if (mode == "linear") {
      o.interp = avoid::Obstacle::Interp::Linear;
    } else if (mode == "hold") {
      o.interp = avoid::Obstacle::Interp::Hold;
    } else {
      throw ParseError("obstacles.interpolation must be linear or hold");
    }
  }
  o.validate();
  return o;
}

}  // namespace

TrajectorySetup to_trajectory_problem(const Document& doc) {
  TrajectorySetup setup;
  const Section* veh = single_section(doc, "vehicle", true);
  Keys vkeys(*veh, {"start", "finish"});
  const auto* start = vkeys.find("start");
  const auto* finish = vkeys.find("finish");
  if (start == nullptr || finish == nullptr) {
    throw ParseError("[vehicle] needs start and finish states");
  }
  setup.problem.start = state_of("vehicle.start", *start);
  setup.problem.finish = state_of("vehicle.finish", *finish);

  const Section* grids = single_section(doc, "grids", true);
  Keys gkeys(*grids, {"control_steps", "control_step", "horizon",
                      "avoid_count", "avoid_times"});
  const double horizon = gkeys.number_or("horizon", 0.0);
  setup.problem.grid_steps =
      grid_steps_from(gkeys, "control_steps", "control_step", horizon);
  double tf = 0.0;
  for (double dt : setup.problem.grid_steps) tf += dt;
  setup.initial_times = avoid::AvoidanceTimes(avoidance_times_from(gkeys, tf));

  for (const Section& s : doc.sections) {
    if (s.name == "obstacles") setup.problem.obstacles.push_back(obstacle_of(s));
  }

  if (const Section* enc = single_section(doc, "encoding", false)) {
    Keys ekeys(*enc, {"big_m", "indicator_eps", "control_sides", "avoid_sides",
                      "inflation", "samples", "max_refinements"});
    setup.problem.control_sides = ekeys.integer_or("control_sides", 20);
    setup.problem.big_m = ekeys.number_or("big_m", 0.0);
    setup.problem.samples = ekeys.integer_or("samples", 1000);
    setup.inflation = ekeys.number_or("inflation", 0.05);
    setup.max_refinements = ekeys.integer_or("max_refinements", 10);
  }
  return setup;
}

drills::DrillInstance to_drill_instance(const Document& doc) {
  drills::DrillInstance inst;
  const Section* drill = single_section(doc, "drill", true);
  Keys dkeys(*drill,
             {"kind", "defender", "attacker", "fuel_weight", "zone_radius",
              "zone_sides", "intercept_radius", "intercept_sides",
              "warning_radius", "warning_sides", "field_radius"});
  const std::string kind = dkeys.word("kind");
  if (kind == "drill1") {
    inst.kind = drills::DrillKind::Drill1;
  } else if (kind == "drill2") {
    inst.kind = drills::DrillKind::Drill2;
  } else {
    throw ParseError("drill.kind must be drill1 or drill2");
  }
  for (const auto& toks : dkeys.all("defender")) {
    inst.defenders.push_back({state_of("drill.defender", toks)});
  }
  for (const auto& toks : dkeys.all("attacker")) {
    if (toks.size() != 4) {
      throw ParseError("drill.attacker needs 4 values: p q vp vq");
    }
    inst.attackers.push_back({to_double("drill.attacker", toks[0]),
                              to_double("drill.attacker", toks[1]),
                              to_double("drill.attacker", toks[2]),
                              to_double("drill.attacker", toks[3])});
  }
  if (inst.defenders.empty() || inst.attackers.empty()) {
    throw ParseError("[drill] needs at least one defender and one attacker");
  }
  inst.fuel_weight = dkeys.number_or("fuel_weight", 0.0);
  inst.geometry.zone_radius = dkeys.number("zone_radius");
  inst.geometry.zone_sides = dkeys.integer("zone_sides");
  inst.geometry.intercept_radius = dkeys.number("intercept_radius");
  inst.geometry.intercept_sides = dkeys.integer("intercept_sides");
  inst.geometry.warning_radius = dkeys.number_or("warning_radius", 0.0);
  inst.geometry.warning_sides =
      dkeys.integer_or("warning_sides", inst.geometry.intercept_sides);
  inst.geometry.field_radius = dkeys.number_or("field_radius", 15.0);

  const Section* grids = single_section(doc, "grids", true);
  Keys gkeys(*grids, {"control_steps", "control_step", "attacker_steps",
                      "attacker_step", "horizon", "avoid_count", "avoid_times"});
  const double horizon = gkeys.number_or("horizon", 0.0);
  inst.control_steps =
      grid_steps_from(gkeys, "control_steps", "control_step", horizon);
  inst.attacker_steps =
      grid_steps_from(gkeys, "attacker_steps", "attacker_step", horizon);
  double tf = 0.0;
  for (double dt : inst.control_steps) tf += dt;
  inst.zone_avoidance_times = avoidance_times_from(gkeys, tf);

  if (const Section* enc = single_section(doc, "encoding", false)) {
    Keys ekeys(*enc, {"big_m", "indicator_eps", "control_sides", "avoid_sides"});
    inst.encoding.big_m = ekeys.number_or("big_m", 0.0);
    inst.encoding.indicator_eps = ekeys.number_or("indicator_eps", 1e-4);
    inst.encoding.control_sides = ekeys.integer_or("control_sides", 8);
    inst.encoding.avoid_sides = ekeys.integer_or("avoid_sides", 8);
  }
  return inst;
}

BenchSetup to_bench_config(const Document& doc) {
  BenchSetup setup;
  const Section* bench = single_section(doc, "bench", true);
  Keys keys(*bench,
            {"seed", "attacker_counts", "instances_per_cell", "time_limit",
             "gap", "fuel_weights", "num_defenders", "kind", "control_steps",
             "attacker_steps", "avoid_count", "zone_radius", "field_radius",
             "intercept_radius", "warning_radius", "zone_sides",
             "intercept_sides", "warning_sides", "control_sides", "avoid_sides",
             "attacker_radius", "attacker_speed", "defender_radius",
             "defender_speed", "inbound", "horizon_slack", "indicator_eps"});
  bench::GeneratorConfig& gen = setup.campaign.base;
  gen.seed = static_cast<std::uint64_t>(keys.number_or("seed", 1));
  gen.num_defenders = keys.integer_or("num_defenders", 1);
  if (keys.has("kind")) {
    const std::string kind = keys.word("kind");
    if (kind == "drill1") {
      gen.kind = drills::DrillKind::Drill1;
    } else if (kind == "drill2") {
      gen.kind = drills::DrillKind::Drill2;
    } else {
      throw ParseError("bench.kind must be drill1 or drill2");
    }
  }
  gen.control_steps = keys.integer_or("control_steps", 4);
  gen.attacker_steps = keys.integer_or("attacker_steps", 6);
  gen.avoid_steps = keys.integer_or("avoid_count", 2);
  gen.zone_radius = keys.number_or("zone_radius", 2.0);
  gen.field_radius = keys.number_or("field_radius", 15.0);
  gen.intercept_radius = keys.number_or("intercept_radius", 1.0);
  gen.warning_radius = keys.number_or("warning_radius", 0.0);
  gen.zone_sides = keys.integer_or("zone_sides", 4);
  gen.intercept_sides = keys.integer_or("intercept_sides", 4);
  gen.warning_sides = keys.integer_or("warning_sides", 4);
  gen.control_sides = keys.integer_or("control_sides", 4);
  gen.avoid_sides = keys.integer_or("avoid_sides", 4);
  gen.horizon_slack = keys.number_or("horizon_slack", 1.1);
  gen.indicator_eps = keys.number_or("indicator_eps", 1e-4);
  if (keys.has("attacker_radius")) {
    const auto v = keys.numbers("attacker_radius");
    if (v.size() != 2) throw ParseError("bench.attacker_radius needs lo hi");
    gen.attacker_radius = {v[0], v[1]};
  } else {
    gen.attacker_radius = {gen.field_radius / 2.0, gen.field_radius};
  }
  if (keys.has("attacker_speed")) {
    const auto v = keys.numbers("attacker_speed");
    if (v.size() != 2) throw ParseError("bench.attacker_speed needs lo hi");
    gen.attacker_speed = {v[0], v[1]};
  }
  if (keys.has("defender_radius")) {
    const auto v = keys.numbers("defender_radius");
    if (v.size() != 2) throw ParseError("bench.defender_radius needs lo hi");
    gen.defender_radius = {v[0], v[1]};
  }
  if (keys.has("defender_speed")) {
    const auto v = keys.numbers("defender_speed");
    if (v.size() != 2) throw ParseError("bench.defender_speed needs lo hi");
    gen.defender_speed = {v[0], v[1]};
  }
  if (keys.has("inbound")) {
    const std::string w = keys.word("inbound");
    if (w == "true" || w == "1") {
      gen.inbound = true;
    } else if (w == "false" || w == "0") {
      gen.inbound = false;
    } else {
      throw ParseError("bench.inbound must be true or false");
    }
  }

  const std::vector<double> counts =
      keys.numbers_or("attacker_counts", {1, 2, 3});
  setup.campaign.attacker_counts.clear();
  for (double c : counts) {
    setup.campaign.attacker_counts.push_back(static_cast<int>(c));
  }
  setup.campaign.instances_per_cell = keys.integer_or("instances_per_cell", 20);
  setup.campaign.time_limit_seconds = keys.number_or("time_limit", 60.0);
  setup.campaign.abs_gap = keys.number_or("gap", 1e-6);
  setup.fuel_weights = keys.numbers_or("fuel_weights", {0.0});
  return setup;
}

}  // namespace mvmilp::io
