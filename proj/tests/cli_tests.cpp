#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "promix/json_io.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr merged
};

std::string cli_path() {
  const char* p = std::getenv("PROMIX_CLI");
  REQUIRE_MESSAGE(p != nullptr, "PROMIX_CLI must point at the binary");
  return p;
}

RunResult run_cli(const std::string& args) {
  const std::string cmd = "'" + cli_path() + "' " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.output.append(buf, n);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHalfspaceProblem = R"({
  "family": {
    "x_dim": 2,
    "atoms": [
      {"weight": 0.5,
       "linop": [[1, 0], [0, 1]],
       "payload": {"type": "normal_cone_box",
                   "lower": [null, null], "upper": [0, null]}},
      {"weight": 0.5,
       "linop": [[1, 0], [0, 1]],
       "payload": {"type": "normal_cone_box",
                   "lower": [1, null], "upper": [null, null]}}
    ]
  },
  "x0": [0, 0],
  "stop": {"abs_tol": 1e-12, "max_iter": 2000}
})";

}  // namespace

TEST_CASE("missing subcommand and bad flags are config errors") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("solve --no-such-flag").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("solve reports the balance point and writes a trace") {
  write_file("halfspaces.json", kHalfspaceProblem);
  const RunResult r =
      run_cli("solve --input halfspaces.json --output solve_out.json");
  CHECK(r.exit_code == 0);

  const promix::ojson out = promix::parse_json_file("solve_out.json");
  CHECK(out["command"] == "solve");
  CHECK(out["converged"] == true);
  CHECK(std::abs(out["final_x"][0].get<double>() - 0.5) < 1e-9);
  CHECK(out["in_v_defect"].get<double>() == 0.0);
  CHECK(out["normal_defect"].get<double>() < 1e-9);
  CHECK(out["atom_exactness"].size() == 2);
  CHECK(std::abs(out["atom_exactness"][0].get<double>() - 0.5) < 1e-9);
  CHECK(out.contains("seed"));
  CHECK(out["tolerances"]["abs_tol"].get<double>() == 1e-12);
  CHECK(out["checks"].size() == 4);

  const std::string trace = read_file("solve_out.trace.csv");
  CHECK(trace.rfind("iter,step_norm\n", 0) == 0);
  CHECK(trace.find("\n1,") != std::string::npos);

  // Bit-identical rerun.
  const RunResult again =
      run_cli("solve --input halfspaces.json --output solve_out2.json");
  CHECK(again.exit_code == 0);
  CHECK(read_file("solve_out2.json") == read_file("solve_out.json"));
  CHECK(read_file("solve_out2.trace.csv") == trace);
}

TEST_CASE("solve flag overrides take precedence over the file") {
  write_file("halfspaces.json", kHalfspaceProblem);
  // The file asks for 2000 iterations at 1e-12; one iteration at tolerance 0
  // cannot converge (the first step from the origin has norm 1/2).
  const RunResult r = run_cli(
      "solve --input halfspaces.json --output solve_cap.json --max-iter 1 "
      "--tol 0");
  CHECK(r.exit_code == 2);  // iteration cap hit, not converged
  const promix::ojson out = promix::parse_json_file("solve_cap.json");
  CHECK(out["converged"] == false);
  CHECK(out["iterations"] == 1);
  CHECK(out["tolerances"]["max_iter"] == 1);

  const RunResult bad_lambda =
      run_cli("solve --input halfspaces.json --lambda 2.5");
  CHECK(bad_lambda.exit_code == 1);
  CHECK(bad_lambda.output.find("config error") != std::string::npos);
}

TEST_CASE("solve rejects inadmissible families with a diagnostic") {
  write_file("heavy.json", R"({
    "family": {
      "x_dim": 1,
      "atoms": [{"weight": 2.0, "linop": [[1]],
                 "payload": {"type": "zero"}}]
    }
  })");
  const RunResult r = run_cli("solve --input heavy.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("violates admissibility") != std::string::npos);

  write_file("broken.json", "{ not json");
  const RunResult bad = run_cli("solve --input broken.json");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("JSON parse error") != std::string::npos);
}

TEST_CASE("verify subcommand reports the identity table") {
  const RunResult r = run_cli(
      "verify --seed 5 --families 4 --output verify_out.json");
  CHECK(r.exit_code == 0);
  const promix::ojson out = promix::parse_json_file("verify_out.json");
  CHECK(out["command"] == "verify");
  CHECK(out["seed"] == 5);
  CHECK(out["pass"] == true);
  CHECK(out["rows"].size() >= 20);
  for (const auto& row : out["rows"]) {
    CHECK(row["pass"] == true);
    CHECK(row["max_residual"].get<double>() <=
          row["threshold"].get<double>());
  }
  // Stderr carries the human-readable table.
  CHECK(r.output.find("resolvent_duality_mixture") != std::string::npos);

  const RunResult again = run_cli(
      "verify --seed 5 --families 4 --output verify_out2.json");
  CHECK(read_file("verify_out2.json") == read_file("verify_out.json"));

  // A different seed still passes but produces a different table.
  const RunResult other = run_cli(
      "verify --seed 6 --families 4 --output verify_out3.json");
  CHECK(other.exit_code == 0);
  CHECK(read_file("verify_out3.json") != read_file("verify_out.json"));
}

TEST_CASE("fault injection makes verify fail and names the identities") {
  const RunResult r = run_cli(
      "verify --seed 5 --families 4 --inject-fault --output fault.json");
  CHECK(r.exit_code == 2);
  const promix::ojson out = promix::parse_json_file("fault.json");
  CHECK(out["pass"] == false);
  bool duality_failed = false;
  for (const auto& row : out["rows"]) {
    if (row["name"] == "resolvent_duality_mixture") {
      duality_failed = row["pass"] == false;
    }
  }
  CHECK(duality_failed);
  CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("soft threshold demo validates the closed form") {
  const RunResult r = run_cli("demo-softthreshold --output soft.json");
  CHECK(r.exit_code == 0);
  const promix::ojson out = promix::parse_json_file("soft.json");
  CHECK(out["n"] == 8);
  CHECK(out["pass"] == true);
  CHECK(out["max_residual"].get<double>() <= 1e-12);
  CHECK(out["weights"][0].get<double>() == 0.125);
  CHECK(out["upper"][0].get<double>() == 1.0);
  // Canonical first sample: top coordinate 3 maps to (1/8)(3 - 1).
  CHECK(out["pairs"][0]["x"][0].get<double>() == 3.0);
  CHECK(out["pairs"][0]["output"][0].get<double>() ==
        doctest::Approx(0.25).epsilon(1e-14));

  write_file("soft_cfg.json", R"({"n": 4, "weights": 0.3})");
  const RunResult heavy = run_cli("demo-softthreshold --input soft_cfg.json");
  CHECK(heavy.exit_code == 1);
  CHECK(heavy.output.find("violates admissibility") != std::string::npos);
}

TEST_CASE("wiener demo fits clipped observations") {
  const RunResult r = run_cli(
      "demo-wiener --atoms 4 --dim 5 --subspace-dim 2 --obs-dim 5 --seed 2 "
      "--output wiener.json");
  CHECK(r.exit_code == 0);
  const promix::ojson out = promix::parse_json_file("wiener.json");
  CHECK(out["converged"] == true);
  CHECK(out["max_atom_residual"].get<double>() <= 1e-6);
  CHECK(out["in_v_defect"].get<double>() <= 1e-9);

  const RunResult again = run_cli(
      "demo-wiener --atoms 4 --dim 5 --subspace-dim 2 --obs-dim 5 --seed 2 "
      "--output wiener2.json");
  CHECK(read_file("wiener2.json") == read_file("wiener.json"));

  const RunResult bad = run_cli("demo-wiener --subspace-dim 9 --dim 4");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("prox average emits a csv table with the conjugate pair check") {
  const RunResult r = run_cli("prox-average --output pa.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = read_file("pa.csv");
  CHECK(csv.find("x,prox,envelope,moreau_pair_residual") != std::string::npos);
  CHECK(csv.find("# command prox-average seed 0") != std::string::npos);
  // Default config is the f / f* pair: prox is the half map, so x = 2 rows
  // show prox 1.
  CHECK(csv.find("\n2,1,") != std::string::npos);

  const RunResult again = run_cli("prox-average --output pa2.csv");
  CHECK(read_file("pa2.csv") == csv);

  write_file("pa_bad.json", R"({
    "functions": [{"type": "abs_sum", "weights": [1]}],
    "weights": [0.7]
  })");
  const RunResult bad = run_cli("prox-average --input pa_bad.json");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("probability") != std::string::npos);

  write_file("pa_cfg.json", R"({
    "functions": [{"type": "abs_sum", "weights": [1]},
                  {"type": "quadratic_kernel"}],
    "weights": [0.5, 0.5],
    "range": [-3, 3],
    "samples": 7
  })");
  const RunResult avg =
      run_cli("prox-average --input pa_cfg.json --output pa3.csv");
  CHECK(avg.exit_code == 0);
  // At x = 3 the average of prox values is (2 + 1.5) / 2.
  CHECK(read_file("pa3.csv").find("\n3,1.75,") != std::string::npos);
}
