// Command-line driver: construct / simulate / validate / analyze.
// Exit codes: 0 success, 1 validation or runtime failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fpdyn/analysis.hpp"
#include "fpdyn/constructions.hpp"
#include "fpdyn/experiment.hpp"
#include "fpdyn/validator.hpp"

namespace {

using namespace fpdyn;

std::string format_vec(const VecI64& v) {
  std::string out = "[";
  for (int k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return out + "]";
}

DynamicState<std::int64_t> replay_identity(const Schedule& sched) {
  const auto a = PayoffMatrix<std::int64_t>::identity(sched.n);
  auto st = DynamicState<std::int64_t>::zero(a);
  for (const Step& s : sched.steps) detail::apply_step(st, a, s.i, s.j);
  return st;
}

void print_terminal(const Schedule& sched) {
  const auto st = replay_identity(sched);
  std::cout << "steps=" << st.t << "\n";
  std::cout << "U=" << format_vec(st.U) << "\n";
  std::cout << "V=" << format_vec(st.V) << "\n";
  const std::int64_t g = gap(st);
  std::cout << "gap=" << g << "\n";
  if (st.t > 0)
    std::cout << "normalized_gap=" << static_cast<double>(g) / static_cast<double>(st.t) << "\n";
}

int cmd_construct(int n, const std::string& variant, std::int64_t epochs, std::int64_t k,
                  std::int64_t T, const std::string& orientation, const std::string& out) {
  Schedule sched;
  if (variant == "main") {
    if (n == 2) {
      if (k < 1) throw CLI::ValidationError("--k is required for 'main' with n=2");
      sched = main_i2(k);
    } else {
      if (epochs < 1) throw CLI::ValidationError("--epochs is required for 'main' with n>=3");
      MainDynamic md = main_dynamic(n, static_cast<int>(epochs));
      std::cout << "epoch T G\n";
      for (const EpochRecord& e : md.epochs)
        std::cout << e.index << " " << e.T << " " << e.G << "\n";
      sched = std::move(md.schedule);
    }
  } else if (variant == "padding") {
    if (k < 1) throw CLI::ValidationError("--k is required for 'padding'");
    if (n == 2) {
      const PadOrientation o = orientation == "high" ? PadOrientation::V1High : PadOrientation::V1Low;
      sched = padding_i2(k, o);
    } else {
      sched = padding_identity(n, k);
    }
  } else if (variant == "part2") {
    if (T < 1) throw CLI::ValidationError("--T is required for 'part2'");
    sched = part2(n, T);
  } else {
    throw CLI::ValidationError("unknown variant '" + variant + "'");
  }
  write_trace_file(out, to_trace(sched));
  print_terminal(sched);
  std::cout << "wrote " << out << "\n";
  return 0;
}

GameSpec parse_game(const std::string& text) {
  GameSpec g;
  if (text.rfind("identity:", 0) == 0) {
    g.kind = GameSpec::Kind::Identity;
    g.m = g.n = std::stoi(text.substr(9));
    return g;
  }
  if (text.rfind("random:", 0) == 0) {
    const std::string dims = text.substr(7);
    const auto x = dims.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--game random needs MxN");
    g.kind = GameSpec::Kind::RandomUniform;
    g.m = std::stoi(dims.substr(0, x));
    g.n = std::stoi(dims.substr(x + 1));
    return g;
  }
  throw CLI::ValidationError("--game must be identity:<n> or random:<m>x<n>");
}

int cmd_simulate(const std::string& config_path, const std::string& game, const std::string& policy,
                 std::uint64_t seed, std::int64_t steps, double grid_ratio, double eps,
                 const std::string& out_trace, const std::string& out_csv, int jobs) {
  std::vector<ExperimentConfig> configs;
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) throw std::runtime_error("cannot open config '" + config_path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    configs = ExperimentConfig::list_from_json(ss.str());
  } else {
    ExperimentConfig c;
    c.game = parse_game(game);
    const auto kind = policy_kind_from_name(policy);
    if (!kind || *kind == PolicyKind::Scripted)
      throw CLI::ValidationError("--policy must be lexicographic, seededRandom or greedyGap");
    c.policy = *kind;
    c.seed = seed;
    c.steps = steps;
    c.grid_ratio = grid_ratio;
    c.tie_eps = eps;
    c.out_trace = out_trace;
    c.out_csv = out_csv;
    configs.push_back(std::move(c));
  }
  if (const char* env = std::getenv("FPDYN_SEED")) {
    const std::uint64_t override_seed = std::stoull(env);
    for (ExperimentConfig& c : configs) c.seed = override_seed;
  }
  const auto results = run_experiments(configs, jobs);
  for (std::size_t r = 0; r < results.size(); ++r) {
    std::cout << "run " << r << ": steps=" << results[r].trace.steps.size()
              << " final_normalized_gap=" << results[r].final_normalized_gap << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& path, const std::string& json_out) {
  Trace trace;
  try {
    trace = read_trace_file(path);
  } catch (const TraceParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  }
  ValidationReport report;
  if (trace.header.matrix.kind == MatrixDescriptor::Kind::Identity) {
    const auto a = matrix_from_descriptor<std::int64_t>(trace.header.matrix);
    report = validate_trace(a, trace);
  } else {
    const auto a = matrix_from_descriptor<Rational>(trace.header.matrix);
    report = validate_trace(a, trace);
  }
  std::cout << report.summary();
  if (!json_out.empty()) {
    std::ofstream os(json_out);
    os << report.to_json() << "\n";
  }
  return report.ok ? 0 : 1;
}

int cmd_analyze(const std::string& in, std::int64_t t_min, std::int64_t t_max, double grid_ratio,
                int n_override, const std::string& out_data) {
  std::ifstream probe(in);
  if (!probe) throw std::runtime_error("cannot open '" + in + "'");
  std::string first_line;
  std::getline(probe, first_line);
  probe.close();

  GapSeries series;
  int n_for_envelope = n_override;
  if (first_line.rfind("fpdyn ", 0) == 0) {
    const Trace trace = read_trace_file(in);
    const SamplePlan plan =
        trace.epoch_marks.empty() ? SamplePlan::geometric(grid_ratio) : SamplePlan::epoch_starts();
    if (trace.header.matrix.kind == MatrixDescriptor::Kind::Identity) {
      const auto a = matrix_from_descriptor<std::int64_t>(trace.header.matrix);
      series = gap_series(a, trace, plan);
      if (n_for_envelope == 0) n_for_envelope = trace.header.matrix.n;
    } else {
      const auto a = matrix_from_descriptor<Rational>(trace.header.matrix);
      series = gap_series(a, trace, plan);
    }
  } else {
    series = read_gap_csv_file(in);
  }
  if (series.samples.empty()) throw std::runtime_error("no samples to analyze");

  if (t_min == 0) t_min = series.samples.front().t;
  if (t_max == 0) t_max = series.samples.back().t;
  const ExponentFit fit = fit_exponent(series, t_min, t_max);
  std::cout << format_fit(fit);

  if (n_for_envelope >= 2) {
    const RateEnvelope env = rate_envelope(n_for_envelope, series);
    std::cout << "envelope_n=" << n_for_envelope << "\n";
    std::cout << "c_low=" << env.c_low << "\n";
    std::cout << "c_high=" << env.c_high << "\n";
    if (env.excluded_zero > 0)
      std::cout << "warning: excluded " << env.excluded_zero << " zero-gap samples\n";
  } else {
    std::cout << "envelope skipped (dimension unknown; pass --n)\n";
  }
  try {
    std::cout << "robinson_sanity=" << (robinson_sanity(series) ? "true" : "false") << "\n";
  } catch (const std::invalid_argument&) {
    // series too short for the two-decade check; omit the line
  }

  if (!out_data.empty()) {
    std::ofstream os(out_data);
    if (!os) throw std::runtime_error("cannot open '" + out_data + "' for writing");
    for (const GapSample& s : series.samples) os << s.t << ' ' << s.normalized << '\n';
    std::ofstream gp(out_data + ".gp");
    gp << "set logscale xy\n";
    gp << "set xlabel 't'\n";
    gp << "set ylabel 'normalized gap'\n";
    gp << "plot '" << out_data << "' using 1:2 with linespoints title 'normalized gap'\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fictitious-play dynamics toolkit"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "generate a certified schedule for an identity game");
  int c_n = 2;
  std::string c_variant = "main", c_orientation = "low", c_out;
  std::int64_t c_epochs = 0, c_k = 0, c_T = 0;
  construct->add_option("--n", c_n, "game dimension")->required();
  construct->add_option("--variant", c_variant, "main | padding | part2")->required();
  construct->add_option("--epochs", c_epochs, "epoch count (main, n>=3)");
  construct->add_option("--k", c_k, "level (main n=2, padding)");
  construct->add_option("--T", c_T, "target T (part2)");
  construct->add_option("--orientation", c_orientation, "low | high (padding, n=2)");
  construct->add_option("--out", c_out, "output trace file")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run fictitious play with a tie-breaking policy");
  std::string s_config, s_game = "identity:3", s_policy = "seededRandom", s_trace, s_csv;
  std::uint64_t s_seed = 0;
  std::int64_t s_steps = 100000;
  double s_ratio = 1.1, s_eps = 1e-9;
  int s_jobs = 1;
  simulate->add_option("--config", s_config, "JSON config (object or array of objects)");
  simulate->add_option("--game", s_game, "identity:<n> | random:<m>x<n>");
  simulate->add_option("--policy", s_policy, "lexicographic | seededRandom | greedyGap");
  simulate->add_option("--seed", s_seed, "master seed");
  simulate->add_option("--steps", s_steps, "number of steps");
  simulate->add_option("--grid-ratio", s_ratio, "geometric sampling ratio");
  simulate->add_option("--eps", s_eps, "tie tolerance for floating payoffs");
  simulate->add_option("--out-trace", s_trace, "trace output path");
  simulate->add_option("--out-csv", s_csv, "gap CSV output path");
  simulate->add_option("--jobs", s_jobs, "parallel workers for config lists");

  // validate
  auto* validate = app.add_subcommand("validate", "certify a trace file");
  std::string v_file, v_json;
  validate->add_option("file", v_file, "trace file")->required();
  validate->add_option("--json", v_json, "write machine-readable report here");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "fit the convergence exponent of a trace or CSV");
  std::string a_in, a_out_data;
  std::int64_t a_tmin = 0, a_tmax = 0;
  double a_ratio = 1.1;
  int a_n = 0;
  analyze->add_option("--in", a_in, "trace or gap CSV file")->required();
  analyze->add_option("--t-min", a_tmin, "fit range lower bound");
  analyze->add_option("--t-max", a_tmax, "fit range upper bound");
  analyze->add_option("--grid-ratio", a_ratio, "sampling ratio for unannotated traces");
  analyze->add_option("--n", a_n, "dimension for the rate envelope (CSV inputs)");
  analyze->add_option("--out-data", a_out_data, "write two-column plot data (+ .gp script)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (construct->parsed())
      return cmd_construct(c_n, c_variant, c_epochs, c_k, c_T, c_orientation, c_out);
    if (simulate->parsed())
      return cmd_simulate(s_config, s_game, s_policy, s_seed, s_steps, s_ratio, s_eps, s_trace,
                          s_csv, s_jobs);
    if (validate->parsed()) return cmd_validate(v_file, v_json);
    if (analyze->parsed()) return cmd_analyze(a_in, a_tmin, a_tmax, a_ratio, a_n, a_out_data);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
