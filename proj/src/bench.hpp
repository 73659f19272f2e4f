#pragma once

#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"

namespace modlog {

struct bench_row {
  std::string variant;
  int reps = 0;
  double median_us = 0.0;
};

// Canonical variant order: runtime, expanded, specialized, univ.
const std::vector<std::string>& bench_variants();

// Loads `sources` (name, text) into a fresh interpreter per variant and times
// full enumeration of `goal`, reps times each. Throws std::invalid_argument
// for unknown variant names; load and goal errors propagate. reps <= 0 skips
// the measurements and yields no rows.
std::vector<bench_row> run_bench(
    const std::vector<std::pair<std::string, std::string>>& sources,
    const std::string& goal, const std::vector<std::string>& variants,
    int reps, const interp_options& base);

// Fixed-width table with a header line.
std::string format_bench(const std::vector<bench_row>& rows);

}  // namespace modlog
