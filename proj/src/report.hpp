#pragma once

// Machine-readable run reports.  JSON is the canonical format (fixed key
// order); CSV is a flat projection with columns quantity, raw, canonical,
// tolerance, pass.  Both carry the same numeric values; wall time appears
// only in JSON and is the one field excluded from byte-level determinism.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace holonomy::app {

struct ResultRow {
  std::string quantity;
  std::optional<double> raw;
  std::optional<double> canonical;
  std::optional<double> tolerance;
  std::optional<bool> pass;
};

struct ConvergenceRow {
  std::size_t samples = 0;
  double phase = 0.0;
  double abs_error = 0.0;
};

struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<ResultRow> results;
  std::vector<std::pair<std::string, bool>> flags;
  std::string classification;  // classify-exchange only; empty otherwise
  std::vector<ConvergenceRow> convergence;
  double wall_time_ms = 0.0;
};

// Shortest representation that round-trips the exact double.
std::string format_double(double v);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);

}  // namespace holonomy::app
