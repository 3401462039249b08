// holonomy: geometric-phase toolkit CLI.
//
// Subcommands: demo-spinor, berry, pancharatnam, ab, classify-exchange,
// check-complementarity.  Configuration comes from flags and/or a config
// file (--config, `key = value` lines plus a ``` fenced matrix block); flags
// override file values.  Exit codes: 0 ok, 2 config error, 3 computation
// error, 4 I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "../src/commands.hpp"
#include "../src/config.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/version.hpp"

namespace {

using holonomy::app::ConfigError;
using holonomy::app::IoError;
using holonomy::app::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitIo = 4;

// The config file must be loaded before CLI11 binds defaults, so that flags
// present on the command line override file values.
std::string find_config_path(int argc, char** argv) {
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--config" && k + 1 < argc) return argv[k + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void add_output_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--format", config.format, "Report format: json or csv")
      ->capture_default_str();
  cmd->add_option("--output", config.output, "Write the report to this file (default stdout)");
}

void add_family_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--family", config.family, "Builtin family name (builtin:spinor)");
  cmd->add_option("--matrix", config.matrix_text, "Inline matrix-DSL text");
  cmd->add_option("--matrix-file", config.matrix_file, "File containing matrix-DSL text");
  cmd->add_option("--params", [&config](const std::vector<std::string>& values) {
        config.params = holonomy::app::split_csv(values.back());
        return true;
      },
      "Comma-separated parameter names, e.g. x,y");
  cmd->add_option("--band", config.band, "Band index (ascending eigenvalue rank)")
      ->capture_default_str();
}

void add_path_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--path", config.path_kind, "Path kind: circle or vertices")
      ->capture_default_str();
  cmd->add_option("--center", [&config](const std::vector<std::string>& values) {
        const auto parts = holonomy::app::split_csv(values.back());
        if (parts.size() != 2) return false;
        try {
          config.center_x = std::stod(parts[0]);
          config.center_y = std::stod(parts[1]);
        } catch (const std::exception&) {
          return false;
        }
        return true;
      },
      "Circle center as cx,cy");
  cmd->add_option("--radius", config.radius, "Circle radius")->capture_default_str();
  cmd->add_option("--winding", config.winding, "Signed number of turns")
      ->capture_default_str();
  cmd->add_option("--samples", config.samples, "Samples along the path")
      ->capture_default_str();
  cmd->add_option("--vertices", config.vertices_json, "Inline JSON vertex list");
  cmd->add_option("--vertices-file", config.vertices_file, "File with a JSON vertex list");
  cmd->add_flag("--open,!--closed", [&config](std::int64_t count) {
        config.closed = count <= 0;
      },
      "Treat a vertex path as open (closed by default)");
}

int dispatch(const RunConfig& config) {
  const holonomy::app::RunReport report = holonomy::app::run_command(config);
  holonomy::app::emit_report(config, report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  try {
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) holonomy::app::load_config_file(config_path, config);
  } catch (const IoError& e) {
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitIo;
  } catch (const holonomy::Error& e) {
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"holonomy: geometric phases three ways, with gauge and "
               "single-valuedness machinery"};
  app.set_help_all_flag("--help-all");
  app.add_flag_callback("--version", [] {
    std::cout << "holonomy " << holonomy::kVersion << "\n";
    std::exit(kExitOk);
  });
  std::string config_path_opt;
  app.add_option("--config", config_path_opt, "Config file (key = value lines)");

  CLI::App* demo = app.add_subcommand(
      "demo-spinor", "Run the two-level worked example end to end");
  demo->add_option("--samples", config.samples, "Circuit samples")->capture_default_str();
  add_output_options(demo, config);

  CLI::App* berry = app.add_subcommand(
      "berry", "Loop integral and single-valuedness audit for a matrix family");
  add_family_options(berry, config);
  add_path_options(berry, config);
  berry->add_option("--coords", config.coords,
                    "Circle interpretation: auto, cartesian, or polar")
      ->capture_default_str();
  berry->add_option("--gauge", config.gauge_expr,
                    "Gauge expression in the path parameter t (e.g. pi*t)");
  berry->add_option("--convergence", [&](const std::vector<std::string>& values) {
          config.convergence = holonomy::app::parse_size_list(values.back());
          return true;
        },
        "Comma-separated sample counts for a convergence table");
  add_output_options(berry, config);

  CLI::App* panch = app.add_subcommand(
      "pancharatnam", "Discrete phase of an explicit state chain (JSON)");
  panch->add_option("--states", config.states_json, "Inline JSON state chain");
  panch->add_option("--states-file", config.states_file, "File with a JSON state chain");
  panch->add_flag("--open,!--closed", [&config](std::int64_t count) {
          config.closed = count <= 0;
        },
        "Treat the chain as open (closed by default)");
  add_output_options(panch, config);

  CLI::App* ab = app.add_subcommand(
      "ab", "Aharonov-Bohm phase, winding topology, and complementarity");
  ab->add_option("--flux", config.flux, "Solenoid flux (natural units)")
      ->capture_default_str();
  ab->add_option("--solenoid", [&config](const std::vector<std::string>& values) {
        const auto parts = holonomy::app::split_csv(values.back());
        if (parts.size() != 2) return false;
        try {
          config.solenoid_x = std::stod(parts[0]);
          config.solenoid_y = std::stod(parts[1]);
        } catch (const std::exception&) {
          return false;
        }
        return true;
      },
      "Solenoid axis position as x,y");
  add_path_options(ab, config);
  ab->add_option("--tol", config.tol, "Complementarity tolerance")->capture_default_str();
  add_output_options(ab, config);

  CLI::App* cls = app.add_subcommand("classify-exchange",
                                     "Boson / fermion / anyon classification");
  cls->add_option("--theta", config.theta, "Single-exchange phase (radians)")
      ->capture_default_str();
  cls->add_option("--dimension", config.dimension, "Spatial dimension (2 or 3)")
      ->capture_default_str();
  add_output_options(cls, config);

  CLI::App* comp = app.add_subcommand("check-complementarity",
                                      "Check whether two phases cancel mod 2 pi");
  comp->add_option("--phase-a", config.phase_a, "First phase (radians)")
      ->capture_default_str();
  comp->add_option("--phase-b", config.phase_b, "Second phase (radians)")
      ->capture_default_str();
  comp->add_option("--tol", config.tol, "Cancellation tolerance")->capture_default_str();
  add_output_options(comp, config);

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  // Subcommand on the command line wins over the config file's `command`.
  for (CLI::App* sub : {demo, berry, panch, ab, cls, comp})
    if (sub->parsed()) config.command = sub->get_name();
  if (config.command.empty()) {
    std::cerr << "holonomy: no command given (see --help)\n";
    return kExitConfig;
  }

  try {
    return dispatch(config);
  } catch (const ConfigError& e) {
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitConfig;
  } catch (const holonomy::ParseError& e) {
    // Matrix-DSL syntax problems are configuration mistakes.
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitIo;
  } catch (const holonomy::Error& e) {
    std::cerr << "holonomy: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "holonomy: internal error: " << e.what() << "\n";
    return kExitCompute;
  }
}
