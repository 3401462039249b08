#include "report.hpp"

#include <json.hpp>

#include <cstdio>

#include "holonomy/core.hpp"

namespace holonomy::app {

using ordered_json = nlohmann::ordered_json;

namespace {
double canonical_of(double phase) { return GeometricPhase(phase).value(); }
}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const RunReport& report) {
  ordered_json j;
  j["command"] = report.command;
  j["version"] = "0.1.0";
  ordered_json cfg = ordered_json::object();
  for (const auto& [key, value] : report.config_echo) cfg[key] = value;
  j["config"] = std::move(cfg);

  ordered_json rows = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json row;
    row["quantity"] = r.quantity;
    if (r.raw) row["raw"] = *r.raw;
    if (r.canonical) row["canonical"] = *r.canonical;
    if (r.tolerance) row["tolerance"] = *r.tolerance;
    if (r.pass) row["pass"] = *r.pass;
    rows.push_back(std::move(row));
  }
  j["results"] = std::move(rows);

  if (!report.flags.empty()) {
    ordered_json flags = ordered_json::object();
    for (const auto& [name, value] : report.flags) flags[name] = value;
    j["flags"] = std::move(flags);
  }
  if (!report.classification.empty()) j["classification"] = report.classification;

  if (!report.convergence.empty()) {
    ordered_json table = ordered_json::array();
    for (const auto& c : report.convergence) {
      ordered_json row;
      row["samples"] = c.samples;
      row["phase"] = c.phase;
      row["canonical"] = canonical_of(c.phase);
      row["abs_error"] = c.abs_error;
      table.push_back(std::move(row));
    }
    j["convergence"] = std::move(table);
  }

  j["wall_time_ms"] = report.wall_time_ms;
  return j.dump(2) + "\n";
}

std::string to_csv(const RunReport& report) {
  std::string out = "quantity,raw,canonical,tolerance,pass\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : report.results) {
    out += r.quantity;
    out += ',';
    out += cell(r.raw);
    out += ',';
    out += cell(r.canonical);
    out += ',';
    out += cell(r.tolerance);
    out += ',';
    if (r.pass) out += *r.pass ? "true" : "false";
    out += '\n';
  }
  for (const auto& [name, value] : report.flags) {
    out += "flag:" + name + ",,,," + (value ? "true" : "false") + "\n";
  }
  for (const auto& c : report.convergence) {
    out += "convergence[N=" + std::to_string(c.samples) + "]," + format_double(c.phase) +
           "," + format_double(canonical_of(c.phase)) + "," + format_double(c.abs_error) +
           ",\n";
  }
  return out;
}

}  // namespace holonomy::app
