#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// Distance on the phase circle; reports may legally sit at either end of
// (-pi, pi] when the phase is a half turn.
double phase_diff(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(HOLONOMY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Reports are byte-identical across runs except for the wall-time line.
std::string strip_wall_time(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    if (line.find("wall_time_ms") == std::string::npos) {
      out += line;
      out += '\n';
    }
    pos = end + 1;
  }
  return out;
}

const json& find_row(const json& report, const std::string& quantity) {
  for (const auto& row : report.at("results"))
    if (row.at("quantity") == quantity) return row;
  const std::string message = "missing result row: " + quantity;
  REQUIRE_MESSAGE(false, message);
  static json dummy;
  return dummy;
}

}  // namespace

TEST_CASE("demo-spinor reports the worked example") {
  const CliResult r = run_cli("demo-spinor --samples 2000");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("command") == "demo-spinor");
  CHECK(phase_diff(find_row(report, "loop_phase_discrete").at("canonical").get<double>(),
                   kPi) <= 1e-4);
  CHECK(find_row(report, "loop_phase_discrete").at("pass").get<bool>());
  CHECK(find_row(report, "gauged_connection_phi").at("pass").get<bool>());
  CHECK(report.at("flags").at("parallel_transport_sign_flip").get<bool>());
  CHECK(report.at("flags").at("gauged_single_valued").get<bool>());
  CHECK_FALSE(report.at("flags").at("parallel_transport_single_valued").get<bool>());
  CHECK_FALSE(report.contains("convergence"));

  const CliResult big = run_cli("demo-spinor --samples 10000");
  REQUIRE(big.exit_code == 0);
  const json full = json::parse(big.out);
  REQUIRE(full.at("convergence").size() == 3);
  CHECK(full.at("convergence")[2].at("samples") == 10000);
  CHECK(full.at("convergence")[2].at("abs_error").get<double>() <= 1e-4);
}

TEST_CASE("berry on the builtin family finds the half-turn phase") {
  const CliResult r =
      run_cli("berry --family builtin:spinor --band 0 --radius 1 --samples 4000");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(phase_diff(find_row(report, "loop_phase").at("canonical").get<double>(), kPi) <=
        1e-4);
  CHECK(report.at("flags").at("sign_flip").get<bool>());

  const CliResult gauged = run_cli(
      "berry --family builtin:spinor --band 0 --samples 4000 --gauge \"pi*t\"");
  REQUIRE(gauged.exit_code == 0);
  const json fixed = json::parse(gauged.out);
  CHECK(fixed.at("flags").at("single_valued").get<bool>());
  CHECK(phase_diff(find_row(fixed, "loop_phase").at("canonical").get<double>(), kPi) <=
        1e-4);
}

TEST_CASE("berry on an inline matrix with a non-enclosing loop") {
  const CliResult r = run_cli(
      "berry --matrix \"[[x, y],[y, -x]]\" --params x,y --band 0 "
      "--center 3,0 --radius 1 --samples 500");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(std::abs(find_row(report, "loop_phase").at("canonical").get<double>()) <= 1e-6);
  CHECK(report.at("flags").at("single_valued").get<bool>());
}

TEST_CASE("pancharatnam subcommand computes chain phases") {
  const double s = 1.0 / std::sqrt(2.0);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "[[[1,0],[0,0]],[[%.17g,0],[%.17g,0]],[[%.17g,0],[0,%.17g]]]", s, s, s, s);
  const CliResult r = run_cli(std::string("pancharatnam --states '") + buf + "'");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  // arg[<a|b><b|c><c|a>] = pi/4 for (1,0), (1,1)/sqrt2, (1,i)/sqrt2.
  CHECK(std::abs(find_row(report, "loop_phase").at("canonical").get<double>() - kPi / 4.0) <=
        1e-12);
  CHECK(std::abs(find_row(report, "transport_holonomy").at("canonical").get<double>() -
                 kPi / 4.0) <= 1e-12);

  const CliResult open = run_cli(std::string("pancharatnam --open --states '") + buf + "'");
  REQUIRE(open.exit_code == 0);
  const json open_report = json::parse(open.out);
  CHECK(find_row(open_report, "transport_holonomy").at("canonical").get<double>() == 0.0);
}

TEST_CASE("ab subcommand reports phase, hypothesis, and cancellation") {
  const CliResult r = run_cli("ab --flux 1.5707963267948966 --radius 1 --samples 720");
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(find_row(report, "winding_number").at("raw").get<double>() == 1.0);
  CHECK(std::abs(find_row(report, "ab_phase").at("canonical").get<double>() - kPi / 2.0) <=
        1e-9);
  CHECK(std::abs(find_row(report, "complementary_phase_hypothesis").at("canonical")
                     .get<double>() +
                 kPi / 2.0) <= 1e-9);
  CHECK(find_row(report, "complementarity_sum").at("pass").get<bool>());

  // Flux quantum, three turns: raw 6 pi, canonical 0.
  const CliResult multi =
      run_cli("ab --flux 6.283185307179586 --winding 3 --radius 2 --samples 900");
  REQUIRE(multi.exit_code == 0);
  const json m = json::parse(multi.out);
  CHECK(std::abs(find_row(m, "ab_phase").at("raw").get<double>() - 3.0 * 2.0 * kPi) <= 1e-9);
  CHECK(std::abs(find_row(m, "ab_phase").at("canonical").get<double>()) <= 1e-9);
  CHECK(find_row(m, "winding_number").at("raw").get<double>() == 3.0);
}

TEST_CASE("classify-exchange subcommand") {
  const CliResult boson = run_cli("classify-exchange --theta 0 --dimension 3");
  REQUIRE(boson.exit_code == 0);
  CHECK(json::parse(boson.out).at("classification") == "Boson");

  const CliResult anyon = run_cli("classify-exchange --theta 1.0471975511965976 --dimension 2");
  REQUIRE(anyon.exit_code == 0);
  const json a = json::parse(anyon.out);
  CHECK(a.at("classification") == "Anyon");
  CHECK(std::abs(find_row(a, "circulation_phase").at("canonical").get<double>() -
                 2.0 * kPi / 3.0) <= 1e-12);
}

TEST_CASE("check-complementarity subcommand") {
  const CliResult ok = run_cli("check-complementarity --phase-a 0.7 --phase-b 5.583185307179586");
  REQUIRE(ok.exit_code == 0);
  CHECK(json::parse(ok.out).at("flags").at("complementarity_vanishes").get<bool>());

  const CliResult no = run_cli("check-complementarity --phase-a 0.3 --phase-b 0.4 --tol 1e-6");
  REQUIRE(no.exit_code == 0);
  const json report = json::parse(no.out);
  CHECK_FALSE(report.at("flags").at("complementarity_vanishes").get<bool>());
  CHECK(std::abs(find_row(report, "complementarity_sum").at("canonical").get<double>() -
                 0.7) <= 1e-12);
}

TEST_CASE("exit codes: config, computation, io") {
  // Out-of-range band on a 2x2 family: config error.
  CHECK(run_cli("berry --family builtin:spinor --band 5").exit_code == 2);
  // Unknown flag.
  CHECK(run_cli("berry --no-such-flag").exit_code == 2);
  // Two family sources at once.
  CHECK(run_cli("berry --family builtin:spinor --matrix \"[[x,y],[y,-x]]\" --params x,y")
            .exit_code == 2);
  // Matrix-DSL syntax error.
  CHECK(run_cli("berry --matrix \"[[x, y],[y, x\" --params x,y").exit_code == 2);
  // Unknown subcommand.
  CHECK(run_cli("no-such-command").exit_code == 2);

  // Degenerate sample on the path: computation error.
  CHECK(run_cli("berry --matrix \"[[x, y],[y, -x]]\" --params x,y --path vertices "
                "--vertices '[[1,0],[0,0],[0,1]]'")
            .exit_code == 3);
  // Forbidden 3D exchange phase: computation error.
  CHECK(run_cli("classify-exchange --theta 1.0471975511965976 --dimension 3").exit_code == 3);
  // Path through the solenoid axis: computation error.
  CHECK(run_cli("ab --flux 1 --path vertices --vertices '[[-1,0],[1,0],[0,1]]'").exit_code ==
        3);

  // Unwritable output location: io error.
  CHECK(run_cli("demo-spinor --samples 100 --output /nonexistent-dir/report.json")
            .exit_code == 4);
  CHECK(run_cli("--config /nonexistent-dir/config.txt demo-spinor").exit_code == 4);
}

TEST_CASE("reports are deterministic modulo wall time") {
  for (const std::string& args :
       {std::string("demo-spinor --samples 500"),
        std::string("berry --family builtin:spinor --band 0 --samples 300"),
        std::string("ab --flux 2.5 --radius 1.5 --samples 360"),
        std::string("classify-exchange --theta 3.14159 --dimension 2"),
        std::string("check-complementarity --phase-a 1.1 --phase-b -1.1")}) {
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(strip_wall_time(a.out) == strip_wall_time(b.out));
    CHECK(a.out.find("wall_time_ms") != std::string::npos);
  }
}

TEST_CASE("csv projection carries the same numbers as json") {
  const std::string args = "demo-spinor --samples 1000";
  const CliResult j = run_cli(args + " --format json");
  const CliResult c = run_cli(args + " --format csv");
  REQUIRE(j.exit_code == 0);
  REQUIRE(c.exit_code == 0);
  const json report = json::parse(j.out);

  // Index CSV rows by quantity.
  std::map<std::string, std::vector<std::string>> csv_rows;
  std::istringstream in(c.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "quantity,raw,canonical,tolerance,pass");
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(pos));
        break;
      }
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    REQUIRE(cells.size() == 5);
    csv_rows[cells[0]] = cells;
  }

  for (const auto& row : report.at("results")) {
    const auto& cells = csv_rows.at(row.at("quantity").get<std::string>());
    if (row.contains("raw")) {
      const double jv = row.at("raw").get<double>();
      const double cv = std::stod(cells[1]);
      CHECK(std::abs(jv - cv) <= 1e-15 * std::max(1.0, std::abs(jv)));
    }
    if (row.contains("canonical")) {
      const double jv = row.at("canonical").get<double>();
      const double cv = std::stod(cells[2]);
      CHECK(std::abs(jv - cv) <= 1e-15 * std::max(1.0, std::abs(jv)));
    }
    if (row.contains("pass"))
      CHECK(cells[4] == (row.at("pass").get<bool>() ? "true" : "false"));
  }
  for (const auto& [name, value] : report.at("flags").items())
    CHECK(csv_rows.at("flag:" + name)[4] == (value.get<bool>() ? "true" : "false"));
}

TEST_CASE("config files drive runs and flags override them") {
  const std::string path = "/tmp/holonomy_test_config.txt";
  {
    std::ofstream out(path);
    out << "# full berry run from a file\n"
        << "command = berry\n"
        << "params = x, y\n"
        << "band = 0\n"
        << "path = circle\n"
        << "center = 0, 0\n"
        << "radius = 1\n"
        << "winding = 1\n"
        << "samples = 400\n"
        << "format = json\n"
        << "matrix = ```\n"
        << "[[x, y],\n"
        << " [y, -x]]\n"
        << "```\n";
  }
  const CliResult r = run_cli("--config " + path);
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("command") == "berry");
  CHECK(report.at("config").at("samples") == "400");
  CHECK(phase_diff(find_row(report, "loop_phase").at("canonical").get<double>(), kPi) <=
        1e-5);

  // A flag overrides the file's value.
  const CliResult over = run_cli("--config " + path + " berry --samples 512");
  REQUIRE(over.exit_code == 0);
  CHECK(json::parse(over.out).at("config").at("samples") == "512");

  std::remove(path.c_str());
}
