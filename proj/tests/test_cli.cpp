#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "fpdyn/analysis.hpp"
#include "fpdyn/constructions.hpp"
#include "fpdyn/experiment.hpp"
#include "fpdyn/validator.hpp"
#include "test_util.hpp"

using namespace fpdyn;
namespace fs = std::filesystem;

namespace {

// Path of the built CLI, injected by ctest. Suite is skipped when absent
// (e.g. when the test binary is run by hand without the environment).
const char* cli_path() { return std::getenv("FPDYN_CLI"); }

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("fpdyn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args, const std::string& stdout_to = {}) {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stdout_to.empty()) cmd += " > " + stdout_to + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

double value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("construct then validate round trip") {
  if (!cli_path()) return;
  Scratch tmp;
  const std::string trace = tmp.file("main2.trace");
  CHECK(run_cli("construct --n 2 --variant main --k 3 --out " + trace, tmp.file("out.txt")) == 0);
  const std::string out = slurp(tmp.file("out.txt"));
  CHECK(out.find("U=[15,15]") != std::string::npos);
  CHECK(out.find("V=[10,20]") != std::string::npos);
  CHECK(run_cli("validate " + trace) == 0);

  // the written file replays to the documented terminal state
  const Trace parsed = read_trace_file(trace);
  const auto st = testutil::replay_identity(2, parsed.steps);
  CHECK(st.U == testutil::make_vec({15, 15}));
  CHECK(st.V == testutil::make_vec({10, 20}));
}

TEST_CASE("construct part2 and main variants") {
  if (!cli_path()) return;
  Scratch tmp;
  const std::string p2 = tmp.file("part2.trace");
  CHECK(run_cli("construct --n 3 --variant part2 --T 1 --out " + p2, tmp.file("p2.txt")) == 0);
  CHECK(slurp(tmp.file("p2.txt")).find("U=[1,1,1]") != std::string::npos);
  CHECK(read_trace_file(p2).steps.size() == 3);

  const std::string m4 = tmp.file("main4.trace");
  CHECK(run_cli("construct --n 4 --variant main --epochs 30 --out " + m4, tmp.file("m4.txt")) == 0);
  const std::string table = slurp(tmp.file("m4.txt"));
  CHECK(table.find("epoch T G") != std::string::npos);
  // the printed epoch table is exactly the arithmetic recurrence
  const auto series = fpdyn::epoch_series(4, 30);
  for (int k = 0; k < 30; ++k) {
    const std::string row = std::to_string(k + 1) + " " + std::to_string(series[k].first) + " " +
                            std::to_string(series[k].second) + "\n";
    CHECK(table.find(row) != std::string::npos);
  }
  CHECK(run_cli("validate " + m4) == 0);
}

TEST_CASE("validate flags a corrupted file and reports parse errors") {
  if (!cli_path()) return;
  Scratch tmp;
  const std::string trace = tmp.file("pad.trace");
  REQUIRE(run_cli("construct --n 2 --variant padding --k 3 --out " + trace) == 0);

  // the row choice of step 2 is forced after any first step; flip it
  Trace tr = read_trace_file(trace);
  tr.steps[1].i ^= 1;
  const std::string bad = tmp.file("bad.trace");
  write_trace_file(bad, tr);
  CHECK(run_cli("validate " + bad + " --json " + tmp.file("report.json"), tmp.file("v.txt")) == 1);
  CHECK(slurp(tmp.file("v.txt")).find("first_violation: step 2") != std::string::npos);
  CHECK(slurp(tmp.file("report.json")).find("\"ok\": false") != std::string::npos);

  std::ofstream(tmp.file("garbled.trace")) << "fpdyn v1 m=2 n=2 matrix=identity:2 policy=scripted seed=none\n1 1\n";
  CHECK(run_cli("validate " + tmp.file("garbled.trace"), tmp.file("g.txt")) == 1);
  CHECK(slurp(tmp.file("g.txt")).find("line 2") != std::string::npos);
}

TEST_CASE("a header-only file validates with zero steps") {
  if (!cli_path()) return;
  Scratch tmp;
  std::ofstream(tmp.file("empty.trace")) << "fpdyn v1 m=3 n=3 matrix=identity:3 policy=scripted seed=none\n";
  CHECK(run_cli("validate " + tmp.file("empty.trace"), tmp.file("e.txt")) == 0);
  CHECK(slurp(tmp.file("e.txt")).find("steps_checked: 0") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  if (!cli_path()) return;
  Scratch tmp;
  CHECK(run_cli("construct --frobnicate", tmp.file("u.txt")) == 2);
  CHECK(run_cli("construct --n 2 --variant main --out " + tmp.file("x.trace"), tmp.file("u2.txt")) == 2);
  CHECK(run_cli("nonsense", tmp.file("u3.txt")) == 2);
}

TEST_CASE("simulate is reproducible byte for byte and honors FPDYN_SEED") {
  if (!cli_path()) return;
  Scratch tmp;
  const std::string args = "simulate --game identity:3 --policy seededRandom --seed 42 --steps 2000";
  REQUIRE(run_cli(args + " --out-trace " + tmp.file("a.trace") + " --out-csv " + tmp.file("a.csv")) == 0);
  REQUIRE(run_cli(args + " --out-trace " + tmp.file("b.trace") + " --out-csv " + tmp.file("b.csv")) == 0);
  CHECK(slurp(tmp.file("a.trace")) == slurp(tmp.file("b.trace")));
  CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
  CHECK(slurp(tmp.file("a.trace")).find("seed=42") != std::string::npos);

  const int rc = std::system((std::string("FPDYN_SEED=7 ") + cli_path() + " " + args +
                              " --out-trace " + tmp.file("c.trace"))
                                 .c_str());
  REQUIRE(WIFEXITED(rc));
  REQUIRE(WEXITSTATUS(rc) == 0);
  CHECK(slurp(tmp.file("c.trace")) != slurp(tmp.file("a.trace")));
  CHECK(slurp(tmp.file("c.trace")).find("seed=7") != std::string::npos);
}

TEST_CASE("simulate with zero steps writes a header-only trace and empty CSV") {
  if (!cli_path()) return;
  Scratch tmp;
  REQUIRE(run_cli("simulate --game identity:3 --policy lexicographic --steps 0 --out-trace " +
                  tmp.file("z.trace") + " --out-csv " + tmp.file("z.csv")) == 0);
  CHECK(slurp(tmp.file("z.trace")) ==
        "fpdyn v1 m=3 n=3 matrix=identity:3 policy=lexicographic seed=0\n");
  CHECK(slurp(tmp.file("z.csv")) == "t,gap_num,gap_den,normalized_gap_float\n");
  CHECK(run_cli("validate " + tmp.file("z.trace")) == 0);
}

TEST_CASE("simulate accepts a config list and runs it on several jobs") {
  if (!cli_path()) return;
  Scratch tmp;
  std::vector<ExperimentConfig> configs(2);
  configs[0].game = GameSpec{GameSpec::Kind::Identity, 3, 3};
  configs[0].policy = PolicyKind::SeededRandom;
  configs[0].seed = 1;
  configs[0].steps = 1000;
  configs[0].out_trace = tmp.file("r0.trace");
  configs[1].game = GameSpec{GameSpec::Kind::RandomUniform, 4, 4};
  configs[1].policy = PolicyKind::SeededRandom;
  configs[1].seed = 2;
  configs[1].steps = 1000;
  configs[1].out_trace = tmp.file("r1.trace");
  std::ofstream(tmp.file("configs.json"))
      << "[" << configs[0].to_json() << "," << configs[1].to_json() << "]";
  CHECK(run_cli("simulate --config " + tmp.file("configs.json") + " --jobs 2", tmp.file("runs.txt")) == 0);
  CHECK(validate_trace(PayoffMatrix<std::int64_t>::identity(3), read_trace_file(tmp.file("r0.trace"))).ok);
  const Trace r1 = read_trace_file(tmp.file("r1.trace"));
  CHECK(r1.header.matrix.kind == MatrixDescriptor::Kind::Inline);
  CHECK(validate_trace(matrix_from_descriptor<Rational>(r1.header.matrix), r1).ok);
}

TEST_CASE("analyze a synthetic power-law CSV and a constructed trace") {
  if (!cli_path()) return;
  Scratch tmp;
  GapSeries s;
  for (double t = 10; t <= 1e6; t *= 1.5) {
    const auto ti = static_cast<std::int64_t>(t);
    s.samples.push_back(GapSample{ti, Rational(1), std::pow(static_cast<double>(ti), -0.5)});
  }
  write_gap_csv_file(tmp.file("pl.csv"), s);
  REQUIRE(run_cli("analyze --in " + tmp.file("pl.csv"), tmp.file("fit.txt")) == 0);
  const std::string fit = slurp(tmp.file("fit.txt"));
  CHECK(value_of(fit, "slope") == doctest::Approx(-0.5));
  CHECK(fit.find("robinson_sanity=true") != std::string::npos);

  const std::string trace = tmp.file("m3.trace");
  REQUIRE(run_cli("construct --n 3 --variant main --epochs 30 --out " + trace) == 0);
  REQUIRE(run_cli("analyze --in " + trace + " --out-data " + tmp.file("plot.dat"),
                  tmp.file("fit2.txt")) == 0);
  const std::string fit2 = slurp(tmp.file("fit2.txt"));
  CHECK(value_of(fit2, "slope") == doctest::Approx(-1.0 / 3.0).epsilon(0.15));
  CHECK(fit2.find("c_low=") != std::string::npos);
  CHECK(fs::exists(tmp.file("plot.dat")));
  CHECK(slurp(tmp.file("plot.dat") + ".gp").find("logscale") != std::string::npos);

  CHECK(run_cli("analyze --in " + tmp.file("missing.csv"), tmp.file("missing.txt")) == 1);
}

TEST_CASE("experiment configs round trip through JSON") {
  ExperimentConfig c;
  c.game = GameSpec{GameSpec::Kind::RandomUniform, 5, 5};
  c.policy = PolicyKind::SeededRandom;
  c.seed = 77;
  c.steps = 12345;
  c.grid_ratio = 1.25;
  c.tie_eps = 1e-8;
  c.out_trace = "x.trace";
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.game.kind == c.game.kind);
  CHECK(back.game.m == c.game.m);
  CHECK(back.policy == c.policy);
  CHECK(back.seed == c.seed);
  CHECK(back.steps == c.steps);
  CHECK(back.grid_ratio == c.grid_ratio);
  CHECK(back.tie_eps == c.tie_eps);
  CHECK(back.out_trace == c.out_trace);
}

TEST_CASE("random tie-breaking on identity:3 converges well below 0.05") {
  ExperimentConfig c;
  c.game = GameSpec{GameSpec::Kind::Identity, 3, 3};
  c.policy = PolicyKind::SeededRandom;
  c.seed = 42;
  c.steps = 100000;
  const ExperimentResult result = run_experiment(c);
  CHECK(result.final_normalized_gap < 0.05);
}

TEST_CASE("lexicographic play on a uniform 5x5 game decays across decades") {
  ExperimentConfig c;
  c.game = GameSpec{GameSpec::Kind::RandomUniform, 5, 5};
  c.policy = PolicyKind::Lexicographic;
  c.seed = 7;
  c.steps = 10000;
  c.grid_ratio = 1.2;
  const ExperimentResult result = run_experiment(c);
  CHECK(robinson_sanity(result.series));
}

TEST_CASE("identical seeds give identical experiment results in memory") {
  ExperimentConfig c;
  c.game = GameSpec{GameSpec::Kind::RandomUniform, 5, 5};
  c.policy = PolicyKind::SeededRandom;
  c.seed = 31337;
  c.steps = 3000;
  const ExperimentResult r1 = run_experiment(c);
  const ExperimentResult r2 = run_experiment(c);
  CHECK(r1.trace.steps == r2.trace.steps);
  CHECK(r1.final_normalized_gap == r2.final_normalized_gap);
  CHECK(r1.trace.header.seed == 31337);
}

}  // TEST_SUITE
