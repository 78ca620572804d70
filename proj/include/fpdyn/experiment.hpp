#pragma once

// Reproducible simulation runs: a config fully determines a run, and the
// same config (including the master seed) reproduces its output files
// byte for byte. One master seed expands into per-purpose streams through
// split_seed(): stream 0 draws random matrix entries, stream 1 seeds the
// tie-breaking policy. Trace headers record the master seed.

#include <cstdint>
#include <string>
#include <vector>

#include "fpdyn/analysis.hpp"
#include "fpdyn/policy.hpp"
#include "fpdyn/trace.hpp"

namespace fpdyn {

struct GameSpec {
  enum class Kind { Identity, RandomUniform };
  Kind kind = Kind::Identity;
  int m = 3;  // rows; equals n for identity games
  int n = 3;
};

struct ExperimentConfig {
  GameSpec game;
  PolicyKind policy = PolicyKind::SeededRandom;
  std::uint64_t seed = 0;  // master seed
  std::int64_t steps = 100000;
  double grid_ratio = 1.1;
  double tie_eps = 1e-9;  // floating lane only
  std::string out_trace;  // empty = do not write
  std::string out_csv;    // empty = do not write

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static std::vector<ExperimentConfig> list_from_json(const std::string& text);
};

struct ExperimentResult {
  Trace trace;
  GapSeries series;
  double final_normalized_gap = 0.0;
};

/// Run one config. Writes the trace/CSV files when paths are set.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Run independent configs on up to `jobs` threads (shared-nothing; results
/// come back in input order).
std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& configs, int jobs);

/// Uniform [0,1) entries drawn from stream 0 of the master seed, row-major.
PayoffMatrix<double> random_uniform_matrix(int m, int n, std::uint64_t master_seed);

}  // namespace fpdyn
