#pragma once

// Concrete tie-breaking policies.
//
// Random draws use std::mt19937_64 with indices reduced modulo the tie-set
// size, so a (seed, call sequence) pair pins the whole run on every
// platform. Master seeds expand to per-run streams with split_seed().

#include <memory>
#include <random>
#include <stdexcept>

#include "fpdyn/engine.hpp"

namespace fpdyn {

// splitmix64; also the documented seed-splitting rule:
// stream k of master seed s is the (k+1)-th output of SplitMix64{s}.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 sm{master};
  std::uint64_t out = 0;
  for (std::uint64_t k = 0; k <= stream; ++k) out = sm.next();
  return out;
}

// Portable uniform [0,1) from the top 53 bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::Lexicographic;
  std::uint64_t seed = 0;          // SeededRandom only
  std::vector<Step> script;        // Scripted only
};

template <class Scalar>
class LexicographicPolicy final : public TieBreakPolicy<Scalar> {
 public:
  StepChoice choose(const DynamicState<Scalar>&, const PayoffMatrix<Scalar>&,
                    const TieSets& ties) override {
    return StepChoice{ties.rows.front(), ties.cols.front()};
  }
  PolicyKind kind() const override { return PolicyKind::Lexicographic; }
};

template <class Scalar>
class SeededRandomPolicy final : public TieBreakPolicy<Scalar> {
 public:
  explicit SeededRandomPolicy(std::uint64_t seed) : seed_(seed), gen_(seed) {}
  StepChoice choose(const DynamicState<Scalar>&, const PayoffMatrix<Scalar>&,
                    const TieSets& ties) override {
    // Row drawn first, then column.
    const int i = ties.rows[gen_() % ties.rows.size()];
    const int j = ties.cols[gen_() % ties.cols.size()];
    return StepChoice{i, j};
  }
  PolicyKind kind() const override { return PolicyKind::SeededRandom; }
  std::optional<std::uint64_t> seed() const override { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Picks the pair (i, j) maximizing the ensuing gap max V(t+1) - min U(t+1);
/// residual ties fall back to the lexicographically first pair.
template <class Scalar>
class GreedyGapPolicy final : public TieBreakPolicy<Scalar> {
 public:
  StepChoice choose(const DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a,
                    const TieSets& ties) override {
    StepChoice best{};
    bool have_best = false;
    Scalar best_gap{};
    for (int i : ties.rows) {
      for (int j : ties.cols) {
        scratch_u_ = state.U + a.entries().row(i).transpose();
        scratch_v_ = state.V + a.entries().col(j);
        const Scalar g = scratch_v_.maxCoeff() - scratch_u_.minCoeff();
        if (!have_best || g > best_gap) {
          have_best = true;
          best_gap = g;
          best = StepChoice{i, j};
        }
      }
    }
    return best;
  }
  PolicyKind kind() const override { return PolicyKind::GreedyGap; }

 private:
  Vec<Scalar> scratch_u_, scratch_v_;
};

template <class Scalar>
class ScriptedPolicy final : public TieBreakPolicy<Scalar> {
 public:
  explicit ScriptedPolicy(std::vector<Step> script) : script_(std::move(script)) {}
  StepChoice choose(const DynamicState<Scalar>&, const PayoffMatrix<Scalar>&,
                    const TieSets&) override {
    if (pos_ >= script_.size()) throw std::out_of_range("scripted policy ran past its script");
    const Step s = script_[pos_++];
    return StepChoice{s.i, s.j};
  }
  PolicyKind kind() const override { return PolicyKind::Scripted; }

 private:
  std::vector<Step> script_;
  std::size_t pos_ = 0;
};

template <class Scalar>
std::unique_ptr<TieBreakPolicy<Scalar>> make_policy(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicyKind::Lexicographic: return std::make_unique<LexicographicPolicy<Scalar>>();
    case PolicyKind::SeededRandom: return std::make_unique<SeededRandomPolicy<Scalar>>(spec.seed);
    case PolicyKind::GreedyGap: return std::make_unique<GreedyGapPolicy<Scalar>>();
    case PolicyKind::Scripted: return std::make_unique<ScriptedPolicy<Scalar>>(spec.script);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace fpdyn
