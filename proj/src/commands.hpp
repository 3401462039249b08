#pragma once

// CLI subcommand implementations: each maps a resolved RunConfig to a
// RunReport.  Errors: ConfigError for user mistakes caught before the
// engines run, library error types for computation failures, IoError for
// file-system trouble; main() maps those to exit codes 2 / 3 / 4.

#include "config.hpp"
#include "report.hpp"

namespace holonomy::app {

RunReport run_command(const RunConfig& config);

RunReport cmd_demo_spinor(const RunConfig& config);
RunReport cmd_berry(const RunConfig& config);
RunReport cmd_pancharatnam(const RunConfig& config);
RunReport cmd_ab(const RunConfig& config);
RunReport cmd_classify_exchange(const RunConfig& config);
RunReport cmd_check_complementarity(const RunConfig& config);

// Writes the report in the configured format to the configured destination
// (stdout when no output path is set).
void emit_report(const RunConfig& config, const RunReport& report);

}  // namespace holonomy::app
