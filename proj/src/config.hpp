#pragma once

// Run configuration: merged view of a config file (plain UTF-8 `key = value`
// lines plus a ``` fenced block for matrix-DSL text) and command-line flags;
// flags override file values.

#include <cstddef>
#include <string>
#include <vector>

#include "holonomy/errors.hpp"

namespace holonomy::app {

// User/config mistakes; exit code 2.  Engine errors keep their library types
// and map to exit code 3, I/O failures to 4.
class ConfigError : public holonomy::Error {
 public:
  using Error::Error;
};

class IoError : public holonomy::Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;

  // family source: exactly one of builtin / inline matrix / matrix file
  std::string family;  // "builtin:spinor" or empty (DSL)
  std::string matrix_text;
  std::string matrix_file;
  std::vector<std::string> params;
  int band = 0;

  // path spec
  std::string path_kind = "circle";  // circle | vertices
  double center_x = 0.0, center_y = 0.0;
  double radius = 1.0;
  int winding = 1;
  std::size_t samples = 10000;
  std::string vertices_json;  // inline JSON [[..],[..],...]
  std::string vertices_file;
  bool closed = true;
  std::string coords = "auto";  // auto | cartesian | polar

  // gauge: expression in the path parameter t; empty = none
  std::string gauge_expr;

  // aharonov-bohm
  double flux = 0.0;
  double solenoid_x = 0.0, solenoid_y = 0.0;

  // pancharatnam chain input
  std::string states_json;
  std::string states_file;

  // exchange statistics
  double theta = 0.0;
  int dimension = 3;

  // complementarity checker
  double phase_a = 0.0, phase_b = 0.0;
  double tol = 1e-9;

  // convergence table: sample counts, empty = no table
  std::vector<std::size_t> convergence;

  // output
  std::string format = "json";  // json | csv
  std::string output;           // empty = stdout
};

// Parses a config file into `config` (only the keys present are touched).
void load_config_file(const std::string& path, RunConfig& config);

// Parses comma-separated helpers used by both the file and flag layers.
std::vector<std::string> split_csv(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace holonomy::app
