#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace holonomy::app {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: key '" + key + "' needs true/false, got '" + value + "'");
}

void parse_pair(const std::string& key, const std::string& value, double& x, double& y) {
  const auto parts = split_csv(value);
  if (parts.size() != 2)
    throw ConfigError("config: key '" + key + "' needs two comma-separated numbers");
  x = parse_double(key, parts[0]);
  y = parse_double(key, parts[1]);
}

}  // namespace

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_csv(text)) {
    const long v = parse_long("convergence", item);
    if (v < 3) throw ConfigError("config: convergence sample counts must be >= 3");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config file line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));

    // ``` starts a fenced multi-line value, terminated by a ``` line.
    if (value == "```") {
      std::string block;
      bool closed_fence = false;
      while (std::getline(in, line)) {
        ++lineno;
        if (trim(line) == "```") {
          closed_fence = true;
          break;
        }
        block += line;
        block += '\n';
      }
      if (!closed_fence)
        throw ConfigError("config file: unterminated ``` block for key '" + key + "'");
      value = block;
    }

    if (key == "command") config.command = value;
    else if (key == "family") config.family = value;
    else if (key == "matrix") config.matrix_text = value;
    else if (key == "matrix_file") config.matrix_file = value;
    else if (key == "params") config.params = split_csv(value);
    else if (key == "band") config.band = static_cast<int>(parse_long(key, value));
    else if (key == "path") config.path_kind = value;
    else if (key == "center") parse_pair(key, value, config.center_x, config.center_y);
    else if (key == "radius") config.radius = parse_double(key, value);
    else if (key == "winding") config.winding = static_cast<int>(parse_long(key, value));
    else if (key == "samples") {
      const long n = parse_long(key, value);
      if (n < 1) throw ConfigError("config: samples must be positive");
      config.samples = static_cast<std::size_t>(n);
    } else if (key == "vertices") config.vertices_json = value;
    else if (key == "vertices_file") config.vertices_file = value;
    else if (key == "closed") config.closed = parse_bool(key, value);
    else if (key == "coords") config.coords = value;
    else if (key == "gauge") config.gauge_expr = (value == "none") ? "" : value;
    else if (key == "flux") config.flux = parse_double(key, value);
    else if (key == "solenoid") parse_pair(key, value, config.solenoid_x, config.solenoid_y);
    else if (key == "states") config.states_json = value;
    else if (key == "states_file") config.states_file = value;
    else if (key == "theta") config.theta = parse_double(key, value);
    else if (key == "dimension") config.dimension = static_cast<int>(parse_long(key, value));
    else if (key == "phase_a") config.phase_a = parse_double(key, value);
    else if (key == "phase_b") config.phase_b = parse_double(key, value);
    else if (key == "tol") config.tol = parse_double(key, value);
    else if (key == "convergence") config.convergence = parse_size_list(value);
    else if (key == "format") config.format = value;
    else if (key == "output") config.output = value;
    else
      throw ConfigError("config file line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
  }
}

}  // namespace holonomy::app
