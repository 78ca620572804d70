#include "fpdyn/experiment.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace fpdyn {

namespace {

std::string game_kind_name(GameSpec::Kind k) {
  return k == GameSpec::Kind::Identity ? "identity" : "randomUniform";
}

GameSpec::Kind game_kind_from_name(const std::string& s) {
  if (s == "identity") return GameSpec::Kind::Identity;
  if (s == "randomUniform") return GameSpec::Kind::RandomUniform;
  throw std::invalid_argument("unknown game kind '" + s + "'");
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["game"] = {{"kind", game_kind_name(c.game.kind)}, {"m", c.game.m}, {"n", c.game.n}};
  j["policy"] = policy_kind_name(c.policy);
  j["seed"] = c.seed;
  j["steps"] = c.steps;
  j["gridRatio"] = c.grid_ratio;
  j["tieEps"] = c.tie_eps;
  j["outTrace"] = c.out_trace;
  j["outCsv"] = c.out_csv;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.game.kind = game_kind_from_name(j.at("game").at("kind").get<std::string>());
  c.game.m = j.at("game").at("m").get<int>();
  c.game.n = j.at("game").at("n").get<int>();
  const std::string policy = j.at("policy").get<std::string>();
  const auto kind = policy_kind_from_name(policy);
  if (!kind) throw std::invalid_argument("unknown policy '" + policy + "'");
  c.policy = *kind;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.steps = j.at("steps").get<std::int64_t>();
  c.grid_ratio = j.value("gridRatio", 1.1);
  c.tie_eps = j.value("tieEps", 1e-9);
  c.out_trace = j.value("outTrace", std::string{});
  c.out_csv = j.value("outCsv", std::string{});
  return c;
}

template <class Scalar>
ExperimentResult run_with(const PayoffMatrix<Scalar>& a, const ExperimentConfig& config) {
  PolicySpec spec;
  spec.kind = config.policy;
  spec.seed = split_seed(config.seed, 1);
  const auto policy = make_policy<Scalar>(spec);
  EngineOptions opts;
  opts.tie_eps = config.tie_eps;
  RunResult<Scalar> run_result = run(a, *policy, config.steps, opts);
  run_result.trace.header.seed = config.seed;  // record the master seed

  ExperimentResult out;
  out.trace = std::move(run_result.trace);
  out.series = gap_series(a, out.trace, SamplePlan::geometric(config.grid_ratio));
  out.final_normalized_gap =
      out.trace.steps.empty() ? 0.0 : to_double(normalized_gap(run_result.state));
  return out;
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2); }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text));
}

std::vector<ExperimentConfig> ExperimentConfig::list_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<ExperimentConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(config_from_json(item));
  } else {
    out.push_back(config_from_json(j));
  }
  return out;
}

PayoffMatrix<double> random_uniform_matrix(int m, int n, std::uint64_t master_seed) {
  std::mt19937_64 gen(split_seed(master_seed, 0));
  std::vector<double> entries(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (double& e : entries) e = uniform01(gen);
  return PayoffMatrix<double>(m, n, std::move(entries));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.steps < 0) throw std::invalid_argument("steps must be nonnegative");
  ExperimentResult result;
  if (config.game.kind == GameSpec::Kind::Identity) {
    if (config.game.m != config.game.n)
      throw std::invalid_argument("identity games need m == n");
    const auto a = PayoffMatrix<std::int64_t>::identity(config.game.n);
    result = run_with(a, config);
  } else {
    const auto a = random_uniform_matrix(config.game.m, config.game.n, config.seed);
    result = run_with(a, config);
  }
  if (!config.out_trace.empty()) write_trace_file(config.out_trace, result.trace);
  if (!config.out_csv.empty()) write_gap_csv_file(config.out_csv, result.series);
  return result;
}

std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& configs, int jobs) {
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  std::vector<ExperimentResult> results(configs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(configs.size());
  const auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= configs.size()) return;
      try {
        results[k] = run_experiment(configs[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(jobs, static_cast<int>(configs.size()));
  for (int k = 0; k < count; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty())
      throw std::runtime_error("config " + std::to_string(k) + " failed: " + errors[k]);
  return results;
}

}  // namespace fpdyn
