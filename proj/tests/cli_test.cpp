#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string tag = "/tmp/deltaqed_cli_" + std::to_string(counter++);
  const std::string out_path = tag + ".out";
  const std::string err_path = tag + ".err";
  const std::string cmd = (env.empty() ? env : env + " ") +
                          std::string(DELTAQED_CLI_PATH) + " " + args + " >" +
                          out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

const char* kSpectrumConfig = R"(
[emitter]
gamma_31 = 0.1
gamma_21 = 0.1
omega_31 = 20.0
omega_21 = 17.0

[drive]
optimal = down

[sweep]
kind = spectrum
start = 19.0
stop = 21.0
points = 41
)";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help lists every subcommand and flag") {
  const CliResult top = run_cli("--help");
  CHECK(top.exit_code == 0);
  for (const char* sub : {"spectrum", "pulse", "circuit", "steady", "saturation"})
    CHECK(top.out.find(sub) != std::string::npos);

  const CliResult sp = run_cli("spectrum --help");
  CHECK(sp.exit_code == 0);
  for (const char* flag :
       {"--config", "--out", "--format", "--plot", "--grid", "--direction"})
    CHECK(sp.out.find(flag) != std::string::npos);

  const CliResult pulse = run_cli("pulse --help");
  CHECK(pulse.out.find("--width") != std::string::npos);
  const CliResult circuit = run_cli("circuit --help");
  CHECK(circuit.out.find("--flux") != std::string::npos);
  CHECK(circuit.out.find("--sweep") != std::string::npos);
  const CliResult steady = run_cli("steady --help");
  CHECK(steady.out.find("--omega-p-over-g31") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("spectrum").exit_code == 2);                       // no --config
  CHECK(run_cli("spectrum --config /nonexistent.ini").exit_code == 2);
  CHECK(run_cli("nonsense --config x").exit_code == 2);
}

TEST_CASE("config errors exit with 2 and name the offender") {
  const std::string path = write_config(
      "cli_badkey.ini", "[emitter]\ngamma_31 = 0.1\nbogus_key = 1\n");
  const CliResult r = run_cli("spectrum --config " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("emitter.bogus_key") != std::string::npos);
}

TEST_CASE("compute errors exit with 1") {
  // infeasible optimal drive: loss_3 >= gamma_31
  const std::string path = write_config("cli_infeasible.ini", R"(
[emitter]
gamma_31 = 0.1
gamma_21 = 0.1
loss_3 = 0.2
omega_31 = 20.0
omega_21 = 17.0
[drive]
optimal = down
[sweep]
kind = spectrum
start = 19.0
stop = 21.0
points = 11
)");
  const CliResult r = run_cli("spectrum --config " + path);
  CHECK(r.exit_code == 1);
}

TEST_CASE("spectrum output is well-formed and reruns byte-identically") {
  const std::string path = write_config("cli_spectrum.ini", kSpectrumConfig);
  const CliResult a = run_cli("spectrum --config " + path);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out.find("nu_ghz, re_ta, im_ta, abs2_ta, abs2_tb, sum") !=
        std::string::npos);
  // lossless optimal drive: every sum entry is 1
  std::istringstream lines(a.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line.substr(0, 6) == "nu_ghz") continue;
    const auto last_comma = line.rfind(", ");
    REQUIRE(last_comma != std::string::npos);
    CHECK(std::abs(std::stod(line.substr(last_comma + 2)) - 1.0) <= 1e-9);
    ++rows;
  }
  CHECK(rows == 41);

  const CliResult b = run_cli("spectrum --config " + path);
  CHECK(a.out == b.out);
}

TEST_CASE("flags override the config file") {
  const std::string path = write_config("cli_override.ini", kSpectrumConfig);
  const CliResult r =
      run_cli("spectrum --config " + path + " --direction up --grid 16:18:5");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("# direction = up") != std::string::npos);
  CHECK(r.out.find("# config.sweep.start = 16") != std::string::npos);
  // up-conversion grid rows run over the requested window
  CHECK(r.out.find("\n16, ") != std::string::npos);
  CHECK(r.out.find("\n18, ") != std::string::npos);
}

TEST_CASE("json output parses and mirrors the csv") {
  const std::string path = write_config("cli_json.ini", kSpectrumConfig);
  const CliResult r = run_cli("spectrum --config " + path + " --format json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("\"columns\"") != std::string::npos);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
  CHECK(r.out.find("\"nu_ghz\"") != std::string::npos);

  const CliResult bad = run_cli("spectrum --config " + path + " --format xml");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("outputs can be written to files and plotted") {
  const std::string path = write_config("cli_files.ini", kSpectrumConfig);
  const std::string csv = "/tmp/deltaqed_cli_out.csv";
  const std::string svg = "/tmp/deltaqed_cli_out.svg";
  const CliResult r = run_cli("spectrum --config " + path + " --out " + csv +
                              " --plot " + svg);
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(csv).find("nu_ghz") != std::string::npos);
  const std::string svg_bytes = slurp(svg);
  CHECK(svg_bytes.find("<svg") == 0);
  CHECK(svg_bytes.size() > 512);
  std::remove(csv.c_str());
  std::remove(svg.c_str());
}

TEST_CASE("circuit single-bias report") {
  const std::string path = write_config("cli_circuit.ini", R"(
[circuit]
alpha = 0.7
beta = 0.5
ej_over_h = 150
ej_over_ec = 80
impedance = 50
flux = 0.4845
)");
  // default truncation passes the doubling certificate
  const CliResult r = run_cli("circuit --config " + path + " --flux 0.4845");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("w21_ghz") != std::string::npos);
  CHECK(r.out.find("# converged = yes") != std::string::npos);

  // an aggressive truncation is reported and fails with exit 1
  const std::string coarse = write_config("cli_circuit_coarse.ini", R"(
[circuit]
alpha = 0.7
beta = 0.5
ej_over_h = 150
ej_over_ec = 80
impedance = 50
flux = 0.4845
n_p_max = 5
n_m_max = 5
)");
  const CliResult c = run_cli("circuit --config " + coarse);
  CHECK(c.exit_code == 1);
  CHECK(c.out.find("# converged = no") != std::string::npos);

  // mirror biases give the same sweep rows apart from the flux column
  const CliResult m = run_cli("circuit --config " + path +
                              " --sweep --grid 0.4845:0.5155:2");
  REQUIRE(m.exit_code == 0);
  const auto pos1 = m.out.find("\n0.4845, ");
  const auto pos2 = m.out.find("\n0.5155, ");
  REQUIRE(pos1 != std::string::npos);
  REQUIRE(pos2 != std::string::npos);
  const std::string row1 =
      m.out.substr(pos1 + 9, m.out.find('\n', pos1 + 1) - pos1 - 9);
  const std::string row2 =
      m.out.substr(pos2 + 9, m.out.find('\n', pos2 + 1) - pos2 - 9);
  const auto parse_row = [](const std::string& row) {
    std::vector<double> vals;
    std::istringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    return vals;
  };
  const auto v1 = parse_row(row1);
  const auto v2 = parse_row(row2);
  REQUIRE(v1.size() == v2.size());
  for (size_t i = 0; i < v1.size(); ++i)
    CHECK(std::abs(v1[i] - v2[i]) <= 1e-9 * std::max(1.0, std::abs(v1[i])));
}

TEST_CASE("sweep output does not depend on the worker count") {
  const std::string path = write_config("cli_threads.ini", R"(
[circuit]
alpha = 0.7
beta = 0.5
ej_over_h = 150
ej_over_ec = 80
impedance = 50
flux = 0.5
n_p_max = 6
n_m_max = 6

[loss]
tilde_gamma3_over_gamma31 = 0
gamma2_over_gamma21 = 0

[sweep]
kind = flux
start = 0.47
stop = 0.53
points = 13
)");
  const CliResult one =
      run_cli("circuit --sweep --config " + path, "DELTAQED_THREADS=1");
  const CliResult four =
      run_cli("circuit --sweep --config " + path, "DELTAQED_THREADS=4");
  REQUIRE(one.exit_code == 0);
  REQUIRE(four.exit_code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("steady requires a probe strength") {
  const std::string path = write_config("cli_steady.ini", R"(
[emitter]
gamma_31 = 0.118
gamma_21 = 0.041
omega_31 = 20.318
omega_21 = 17.033
[drive]
optimal = down
[sweep]
kind = spectrum
start = -3
stop = 3
points = 11
)");
  CHECK(run_cli("steady --config " + path).exit_code == 2);
  const CliResult r =
      run_cli("steady --config " + path + " --omega-p-over-g31 0.01");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("abs2_tb_analytic") != std::string::npos);
}

TEST_SUITE_END();
