#include "mvmilp/mps.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

namespace mvmilp {
namespace {

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void put_field(std::string& line, size_t pos, const std::string& text) {
  if (line.size() < pos) line.resize(pos, ' ');
  line += text;
}

// Field offsets of the classic fixed MPS layout (0-based).
std::string record(const std::string& f1, const std::string& f2,
                   const std::string& f3 = {}, const std::string& f4 = {}) {
  std::string line;
  put_field(line, 1, f1);
  put_field(line, 4, f2);
  if (!f3.empty()) put_field(line, 14, f3);
  if (!f4.empty()) put_field(line, 24, f4);
  return line;
}

bool mps_safe(const std::string& name) {
  if (name.empty() || name.size() > 8) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string export_mps(const MilpModel& model, const std::string& problem_name) {
  const int nv = model.num_variables();
  const int nc = model.num_constraints();

  std::vector<std::string> col_names(nv);
  std::set<std::string> used;
  for (int j = 0; j < nv; ++j) {
    const std::string& want = model.variables()[j].name;
    if (mps_safe(want) && used.insert(want).second) {
      col_names[j] = want;
    }
  }
  for (int j = 0; j < nv; ++j) {
    if (!col_names[j].empty()) continue;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", j + 1);
    col_names[j] = buf;
    used.insert(col_names[j]);
  }
  std::vector<std::string> row_names(nc);
  for (int i = 0; i < nc; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07d", i + 1);
    row_names[i] = buf;
  }

  // Column-wise entries in row order, objective first.
  std::vector<std::vector<std::pair<int, double>>> entries(nv);
  for (const auto& [v, c] : model.objective().terms()) {
    entries[v].push_back({-1, c});
  }
  for (int i = 0; i < nc; ++i) {
    for (const auto& [v, c] : model.constraints()[i].expr.terms()) {
      entries[v].push_back({i, c});
    }
  }

  std::string out;
  out += "NAME          " + problem_name + "\n";
  out += "ROWS\n";
  out += record("N", "COST") + "\n";
  for (int i = 0; i < nc; ++i) {
    const char* tag = "L";
    switch (model.constraints()[i].sense) {
      case Sense::LessEq:
        tag = "L";
        break;
      case Sense::GreaterEq:
        tag = "G";
        break;
      case Sense::Equal:
        tag = "E";
        break;
    }
    out += record(tag, row_names[i]) + "\n";
  }

  out += "COLUMNS\n";
  for (int j = 0; j < nv; ++j) {
    if (entries[j].empty()) {
      // Declare otherwise-unreferenced columns with a zero objective entry.
      out += record("", col_names[j], "COST", fmt_value(0.0)) + "\n";
      continue;
    }
    for (const auto& [i, c] : entries[j]) {
      const std::string& rname = i < 0 ? std::string("COST") : row_names[i];
      out += record("", col_names[j], rname, fmt_value(c)) + "\n";
    }
  }

  out += "RHS\n";
  if (model.objective().constant() != 0.0) {
    out += record("", "RHS", "COST", fmt_value(-model.objective().constant())) +
           "\n";
  }
  for (int i = 0; i < nc; ++i) {
    if (model.constraints()[i].rhs != 0.0) {
      out += record("", "RHS", row_names[i],
                    fmt_value(model.constraints()[i].rhs)) +
             "\n";
    }
  }

  out += "BOUNDS\n";
  for (int j = 0; j < nv; ++j) {
    const Variable& v = model.variables()[j];
    if (v.kind == VarKind::Binary) {
      out += record("BV", "BND", col_names[j]) + "\n";
      continue;
    }
    const bool lo_fin = std::isfinite(v.lower);
    const bool up_fin = std::isfinite(v.upper);
    if (lo_fin && up_fin && v.lower == v.upper) {
      out += record("FX", "BND", col_names[j], fmt_value(v.lower)) + "\n";
      continue;
    }
    if (!lo_fin && !up_fin) {
      out += record("FR", "BND", col_names[j]) + "\n";
      continue;
    }
    if (!lo_fin) {
      out += record("MI", "BND", col_names[j]) + "\n";
    } else if (v.lower != 0.0) {
      out += record("LO", "BND", col_names[j], fmt_value(v.lower)) + "\n";
    }
    if (up_fin) {
      out += record("UP", "BND", col_names[j], fmt_value(v.upper)) + "\n";
    }
  }
  out += "ENDATA\n";
  return out;
}

}  // namespace mvmilp
