#pragma once

#include <string>

#include "mvmilp/model.hpp"

namespace mvmilp {

// Fixed-format MPS document with ROWS/COLUMNS/RHS/BOUNDS sections. Binary
// variables are marked with BV entries in BOUNDS. Variable names are reused
// when they are MPS-safe (alphanumeric/underscore, at most 8 characters,
// unique); otherwise columns are auto-named C0000001, C0000002, ... in id
// order. Rows are named R0000001, ... and the objective row COST.
std::string export_mps(const MilpModel& model,
                       const std::string& problem_name = "MVMILP");

}  // namespace mvmilp
