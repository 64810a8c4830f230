#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirac/cli.hpp"
#include "dirac/trajectory_io.hpp"
#include "test_helpers.hpp"

using namespace dirac;
using dirac::test::vec;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dirac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("dirac_test_" + name);
  std::ofstream(path) << content;
  return path;
}

int exe_exit_code(const std::string& args) {
  const std::string cmd = std::string(DIRAC_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Trajectory parse_csv(const std::string& s) {
  std::istringstream in(s);
  return read_trajectory_csv(in);
}

}  // namespace

TEST_CASE("run: free particle rows") {
  const CliResult r = invoke({"run", "--system", "free_particle", "--method", "del", "--h", "0.5", "--steps", "2",
                           "--q0", "0", "--p0", "1"});
  CHECK(r.code == cli::kExitOk);
  const Trajectory t = parse_csv(r.out);
  REQUIRE(t.points.size() == 3);
  CHECK(t.points[0].q()[0] == 0.0);
  CHECK(std::abs(t.points[1].q()[0] - 0.5) <= 1e-15);
  CHECK(std::abs(t.points[2].q()[0] - 1.0) <= 1e-15);
  CHECK(r.out.rfind("k,q_0,p_0,newton_iters,residual_norm,constraint_violation\n", 0) == 0);
}

TEST_CASE("run: zero steps echoes the initial point") {
  const CliResult r = invoke({"run", "--system", "harmonic_oscillator", "--steps", "0", "--q0", "0.25", "--p0", "-1.5"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "k,q_0,p_0,newton_iters,residual_norm,constraint_violation\n0,0.25,-1.5,0,0,0\n");
}

TEST_CASE("run: constrained output carries multiplier columns") {
  const CliResult r = invoke({"run", "--system", "nonholonomic_particle", "--method", "del-constrained", "--steps", "3",
                           "--q0", "0,1,0", "--p0", "1,0,0"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("constraint_violation,lambda_0\n") != std::string::npos);
  const Trajectory t = parse_csv(r.out);
  REQUIRE(t.steps() == 3);
  CHECK(t.diagnostics[0].multipliers[0] == doctest::Approx(-0.5));
}

TEST_CASE("run: JSON format") {
  const CliResult r = invoke({"run", "--system", "pendulum", "--steps", "4", "--q0", "1", "--p0", "0", "--format", "json"});
  CHECK(r.code == cli::kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["method"] == "del");
  CHECK(j["trajectory"].size() == 5);
}

TEST_CASE("run: configuration errors exit 1 and name the field") {
  CliResult r = invoke({"run", "--system", "harmonic_oscillator", "--q0", "1,2", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("q0") != std::string::npos);
  r = invoke({"run", "--system", "no_such_system", "--q0", "1", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"run", "--system", "harmonic_oscillator", "--q0", "1", "--p0", "0", "--h", "-0.1"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("'h'") != std::string::npos);
  r = invoke({"run", "--system", "harmonic_oscillator", "--q0", "abc", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"run", "--method", "leapfrog", "--q0", "1", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"run", "--bogus-flag"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"run", "--config", "/nonexistent/config.json"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({});
  CHECK(r.code == cli::kExitConfig);
}

TEST_CASE("run: solver failure exits 2 and keeps the partial trajectory") {
  // one Newton iteration cannot reach the tolerance on the pendulum
  const CliResult r = invoke({"run", "--system", "pendulum", "--steps", "5", "--h", "0.5", "--q0", "1", "--p0", "2",
                           "--max-iters", "1", "--newton-tol", "1e-300"});
  CHECK(r.code == cli::kExitNumerical);
  CHECK(r.err.find("solver failure") != std::string::npos);
  CHECK(parse_csv(r.out).points.size() == 1);
}

TEST_CASE("run: config file with a custom Lagrangian and constraints") {
  const auto path = temp_file("custom.json", R"({
    "n": 2,
    "lagrangian": {"mass": [1, 2], "potential": {"type": "quadratic", "k": 1}},
    "constraints": {"m": 1, "A": {"type": "constant", "matrix": [[1, -1]]}, "phi_mode": "midpoint"},
    "method": "del-constrained", "h": 0.1, "steps": 20, "q0": [0, 0], "p0": [1, 2], "rule": "trapezoidal"
  })");
  const CliResult r = invoke({"run", "--config", path.string()});
  CHECK(r.code == cli::kExitOk);
  const Trajectory t = parse_csv(r.out);
  REQUIRE(t.steps() == 20);
  for (const auto& d : t.diagnostics) CHECK(d.constraint_violation <= 1e-12);
  // --system also accepts the path, flags override the file
  const CliResult s = invoke({"run", "--system", path.string(), "--steps", "3"});
  CHECK(s.code == cli::kExitOk);
  CHECK(parse_csv(s.out).steps() == 3);

  const auto bad = temp_file("bad.json", R"({"system": "harmonic_oscillator", "q0": [1], "p0": [0],
    "constraints": {"m": 1, "A": {"type": "constant", "matrix": [[1]]}}})");
  CHECK(invoke({"run", "--config", bad.string()}).code == cli::kExitConfig);
  const auto broken = temp_file("broken.json", "{ not json");
  CHECK(invoke({"run", "--config", broken.string()}).code == cli::kExitConfig);
}

TEST_CASE("run: output file") {
  const auto path = std::filesystem::temp_directory_path() / "dirac_test_out.csv";
  std::filesystem::remove(path);
  const CliResult r = invoke({"run", "--system", "harmonic_oscillator", "--steps", "2", "--q0", "1", "--p0", "0",
                           "--output", path.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(read_trajectory_csv(in).points.size() == 3);
}

TEST_CASE("CSV round-trips at full precision") {
  const CliResult r = invoke({"run", "--system", "nonholonomic_particle", "--method", "ham-plus-constrained", "--steps",
                           "25", "--q0", "0.1,0.7,-0.3", "--p0", "0.3,-0.2,0.9"});
  REQUIRE(r.code == cli::kExitOk);
  const Trajectory t = parse_csv(r.out);
  std::ostringstream again;
  write_trajectory_csv(t, 1, again);
  CHECK(again.str() == r.out);

  // shortest round-trip formatting
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
    CHECK(s.size() <= 24);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("verify") {
  CliResult r = invoke({"verify", "--system", "harmonic_oscillator", "--q0", "1", "--p0", "0", "--checks", "symplectic"});
  CHECK(r.code == cli::kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["name"] == "symplectic");
  CHECK(j[0]["pass"] == true);

  r = invoke({"verify", "--system", "pendulum", "--q0", "0.5", "--p0", "0", "--checks",
           "symplectic,genfunc1,genfunc2,genfunc3,dirac,gradient,energy", "--steps", "200"});
  CHECK(r.code == cli::kExitOk);
  CHECK(nlohmann::json::parse(r.out).size() == 7);

  // unconstrained method on a constrained system
  r = invoke({"verify", "--system", "nonholonomic_particle", "--method", "del", "--q0", "0,1,0", "--p0", "1,0,0",
           "--checks", "dirac"});
  CHECK(r.code == cli::kExitCheckFailed);
  CHECK(nlohmann::json::parse(r.out)[0]["pass"] == false);

  r = invoke({"verify", "--system", "nonholonomic_particle", "--method", "del-constrained", "--q0", "0,1,0", "--p0",
           "1,0,0", "--checks", "dirac", "--tol", "1e-9"});
  CHECK(r.code == cli::kExitOk);
  // energy from a momentum that already satisfies the constraint
  r = invoke({"verify", "--system", "nonholonomic_particle", "--method", "del-constrained", "--q0", "0,1,0", "--p0",
              "1,0.2,1", "--checks", "energy", "--steps", "500", "--tol", "1e-6"});
  CHECK(r.code == cli::kExitOk);

  r = invoke({"verify", "--system", "harmonic_oscillator", "--q0", "1", "--p0", "0", "--checks", "symplectic,bogus"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"verify", "--system", "harmonic_oscillator", "--q0", "1", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);
}

TEST_CASE("verify: seed from the environment") {
  ::setenv("DIRAC_SEED", "7", 1);
  const CliResult a = invoke({"verify", "--system", "pendulum", "--q0", "1", "--p0", "0", "--checks", "symplectic"});
  ::setenv("DIRAC_SEED", "8", 1);
  const CliResult b = invoke({"verify", "--system", "pendulum", "--q0", "1", "--p0", "0", "--checks", "symplectic"});
  ::setenv("DIRAC_SEED", "x", 1);
  const CliResult c = invoke({"verify", "--system", "pendulum", "--q0", "1", "--p0", "0", "--checks", "symplectic"});
  ::unsetenv("DIRAC_SEED");
  CHECK(a.code == cli::kExitOk);
  CHECK(b.code == cli::kExitOk);
  CHECK(a.out != b.out);
  CHECK(c.code == cli::kExitConfig);
}

TEST_CASE("compare") {
  CliResult r = invoke({"compare", "--system", "harmonic_oscillator", "--methods", "del,ham-plus", "--steps", "100",
                     "--q0", "1", "--p0", "0", "--tol", "1e-8"});
  CHECK(r.code == cli::kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["pairs"].size() == 1);
  CHECK(j["pairs"][0]["max_deviation"].get<double>() <= 1e-8);

  r = invoke({"compare", "--system", "nonholonomic_particle", "--methods", "del-constrained,ham-plus-constrained",
           "--q0", "0,1,0", "--p0", "1,0,0", "--tol", "1e-8"});
  CHECK(r.code == cli::kExitOk);

  r = invoke({"compare", "--system", "nonholonomic_particle", "--methods", "del,del-constrained", "--q0", "0,1,0",
           "--p0", "1,0,0", "--tol", "1e-8"});
  CHECK(r.code == cli::kExitCheckFailed);

  r = invoke({"compare", "--system", "harmonic_oscillator", "--methods", "del", "--q0", "1", "--p0", "0"});
  CHECK(r.code == cli::kExitConfig);

  r = invoke({"compare", "--system", "pendulum", "--methods", "del,ham-plus", "--q0", "1", "--p0", "2", "--h", "0.5",
           "--max-iters", "1", "--newton-tol", "1e-300"});
  CHECK(r.code == cli::kExitNumerical);
}

TEST_CASE("help exits 0") {
  const CliResult r = invoke({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("the executable reports the same exit codes") {
  CHECK(exe_exit_code("run --system harmonic_oscillator --q0 1 --p0 0 --steps 2") == 0);
  CHECK(exe_exit_code("run --system harmonic_oscillator --q0 1,2 --p0 0") == 1);
  CHECK(exe_exit_code("run --system pendulum --q0 1 --p0 2 --h 0.5 --max-iters 1 --newton-tol 1e-300") == 2);
  CHECK(exe_exit_code("verify --system nonholonomic_particle --q0 0,1,0 --p0 1,0,0 --checks dirac") == 3);
}

TEST_CASE("shipped configs run cleanly") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(DIRAC_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const CliResult r = invoke({"run", "--config", entry.path().string()});
    CHECK_MESSAGE(r.code == cli::kExitOk, (entry.path().string() + ": " + r.err));
    const CliResult v = invoke({"verify", "--config", entry.path().string(), "--checks", "dirac,gradient"});
    CHECK_MESSAGE(v.code == cli::kExitOk, (entry.path().string() + ": " + v.out));
  }
  CHECK(count >= 3);
}
