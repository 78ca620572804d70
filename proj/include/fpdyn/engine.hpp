#pragma once

// Fictitious-play dynamics over a payoff matrix A, kept as the vector system
//
//   U(0) = 0,  U(t+1) = U(t) + (row i of A),   i with V_i(t) = max V(t)
//   V(0) = 0,  V(t+1) = V(t) + (column j of A), j with U_j(t) = min U(t)
//
// together with the play counts of both sides. U/t and V/t are the payoff
// vectors against the players' empirical mixed strategies, so the
// normalized gap (max V - min U)/t is the duality gap of the empirical
// strategy pair. Both players update simultaneously from the same pre-step
// state. Ties are resolved by a TieBreakPolicy; scripted steps are checked
// against the tie sets and yield an InvalidChoice certificate on violation.
//
// Exact scalars (integers, rationals) form tie sets by exact equality.
// Floating scalars use the tie tolerance from EngineOptions. For identity
// games the int64 lane is exact as long as t stays below 2^62, which the
// step functions enforce.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpdyn/payoff_matrix.hpp"
#include "fpdyn/scalars.hpp"
#include "fpdyn/trace.hpp"

namespace fpdyn {

inline constexpr std::int64_t kMaxSteps = std::int64_t{1} << 62;

struct EngineOptions {
  double tie_eps = 1e-9;  // tie tolerance, floating scalars only
};

template <class Scalar>
struct DynamicState {
  std::int64_t t = 0;
  Vec<Scalar> U;        // n components, accumulated row-player payoff per column
  Vec<Scalar> V;        // m components, accumulated column-player loss per row
  VecI64 row_counts;    // m components, times each row was played
  VecI64 col_counts;    // n components, times each column was played

  static DynamicState zero(const PayoffMatrix<Scalar>& a) {
    DynamicState s;
    s.U = Vec<Scalar>::Zero(a.cols());
    s.V = Vec<Scalar>::Zero(a.rows());
    s.row_counts = VecI64::Zero(a.rows());
    s.col_counts = VecI64::Zero(a.cols());
    return s;
  }
};

struct TieSets {
  std::vector<int> rows;  // argmax of V
  std::vector<int> cols;  // argmin of U
};

enum class ViolationSide { Row, Col };

struct InvalidChoice {
  std::int64_t t = 0;  // pre-step time of the offending step (step index t+1 on the wire)
  ViolationSide side = ViolationSide::Row;
  int index = 0;             // 0-based
  std::vector<int> tie_set;  // 0-based
  std::string describe() const {
    std::string s = "step " + std::to_string(t + 1) + ": " +
                    (side == ViolationSide::Row ? "row" : "column") + " choice " +
                    std::to_string(index + 1) + " is not a best response; tie set {";
    for (std::size_t k = 0; k < tie_set.size(); ++k)
      s += (k ? "," : "") + std::to_string(tie_set[k] + 1);
    return s + "}";
  }
};

struct StepChoice {
  int i = 0;
  int j = 0;
};

template <class Scalar>
class TieBreakPolicy {
 public:
  virtual ~TieBreakPolicy() = default;
  // Pick one (row, column) pair from the supplied tie sets. The returned
  // indices must be members of the tie sets; step() enforces this.
  virtual StepChoice choose(const DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a,
                            const TieSets& ties) = 0;
  virtual PolicyKind kind() const = 0;
  virtual std::optional<std::uint64_t> seed() const { return std::nullopt; }
};

namespace detail {

template <class Scalar>
void check_dimensions(const DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a) {
  if (state.U.size() != a.cols() || state.V.size() != a.rows() ||
      state.row_counts.size() != a.rows() || state.col_counts.size() != a.cols())
    throw std::invalid_argument("dynamic state dimensions do not match the payoff matrix");
}

template <class Scalar>
void apply_step(DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a, int i, int j) {
  if (state.t >= kMaxSteps) throw std::overflow_error("step count limit reached");
  if (a.is_identity()) {
    state.U[i] += Scalar(1);
    state.V[j] += Scalar(1);
  } else {
    state.U += a.entries().row(i).transpose();
    state.V += a.entries().col(j);
  }
  ++state.row_counts[i];
  ++state.col_counts[j];
  ++state.t;
}

template <class Scalar>
std::vector<int> ties_of_max(const Vec<Scalar>& v, double eps) {
  const Scalar m = v.maxCoeff();
  std::vector<int> out;
  for (int k = 0; k < v.size(); ++k)
    if (tie_equal(v[k], m, eps)) out.push_back(k);
  return out;
}

template <class Scalar>
std::vector<int> ties_of_min(const Vec<Scalar>& v, double eps) {
  const Scalar m = v.minCoeff();
  std::vector<int> out;
  for (int k = 0; k < v.size(); ++k)
    if (tie_equal(v[k], m, eps)) out.push_back(k);
  return out;
}

}  // namespace detail

/// Best-response tie sets at the current state: rows attaining max V and
/// columns attaining min U. Both are nonempty.
template <class Scalar>
TieSets best_response_sets(const DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a,
                           const EngineOptions& opts = {}) {
  detail::check_dimensions(state, a);
  return TieSets{detail::ties_of_max(state.V, opts.tie_eps), detail::ties_of_min(state.U, opts.tie_eps)};
}

/// Apply one scripted step. Returns an InvalidChoice certificate if (i, j)
/// is not a pair of best responses at the current state; otherwise mutates
/// the state in place. This is the validity-certificate primitive: a trace
/// is a legal execution iff every step passes.
template <class Scalar>
std::optional<InvalidChoice> step_scripted(DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a,
                                           int i, int j, const EngineOptions& opts = {}) {
  detail::check_dimensions(state, a);
  if (i < 0 || i >= a.rows()) throw std::invalid_argument("row index out of range");
  if (j < 0 || j >= a.cols()) throw std::invalid_argument("column index out of range");
  if (!tie_equal(state.V[i], state.V.maxCoeff(), opts.tie_eps))
    return InvalidChoice{state.t, ViolationSide::Row, i, detail::ties_of_max(state.V, opts.tie_eps)};
  if (!tie_equal(state.U[j], state.U.minCoeff(), opts.tie_eps))
    return InvalidChoice{state.t, ViolationSide::Col, j, detail::ties_of_min(state.U, opts.tie_eps)};
  detail::apply_step(state, a, i, j);
  return std::nullopt;
}

/// Apply one step with tie-breaking delegated to the policy. Throws
/// std::logic_error if the policy picks outside its tie sets.
template <class Scalar>
Step step(DynamicState<Scalar>& state, const PayoffMatrix<Scalar>& a, TieBreakPolicy<Scalar>& policy,
          const EngineOptions& opts = {}) {
  const TieSets ties = best_response_sets(state, a, opts);
  const StepChoice c = policy.choose(state, a, ties);
  const bool row_ok = std::find(ties.rows.begin(), ties.rows.end(), c.i) != ties.rows.end();
  const bool col_ok = std::find(ties.cols.begin(), ties.cols.end(), c.j) != ties.cols.end();
  if (!row_ok || !col_ok)
    throw std::logic_error("tie-break policy returned a choice outside the tie set at t=" +
                           std::to_string(state.t));
  detail::apply_step(state, a, c.i, c.j);
  return Step{c.i, c.j};
}

template <class Scalar>
struct RunResult {
  Trace trace;
  DynamicState<Scalar> state;
};

/// Run `steps` steps from the zero state and record the trace.
template <class Scalar>
RunResult<Scalar> run(const PayoffMatrix<Scalar>& a, TieBreakPolicy<Scalar>& policy,
                      std::int64_t steps, const EngineOptions& opts = {}) {
  if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
  RunResult<Scalar> out;
  out.state = DynamicState<Scalar>::zero(a);
  out.trace.header.matrix = descriptor_from_matrix(a);
  out.trace.header.policy_name = policy_kind_name(policy.kind());
  out.trace.header.seed = policy.seed();
  out.trace.steps.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t s = 0; s < steps; ++s) out.trace.steps.push_back(step(out.state, a, policy, opts));
  return out;
}

/// max V(t) - min U(t).
template <class Scalar>
Scalar gap(const DynamicState<Scalar>& state) {
  return state.V.maxCoeff() - state.U.minCoeff();
}

/// (max V(t) - min U(t)) / t as an exact rational. Requires t >= 1.
template <class Scalar>
Rational normalized_gap(const DynamicState<Scalar>& state) {
  if (state.t < 1) throw std::invalid_argument("normalized gap needs t >= 1");
  return to_rational(gap(state)) / Rational(state.t);
}

// Reconstruction identities: U = (play counts of rows)^T A and V = A (play
// counts of columns). Exposed so tests and the validator can assert them.
// Spelled as loops so they work for every scalar, including the
// multiprecision ones whose implicit conversions fight Eigen's
// scalar-promotion machinery.
template <class Scalar>
Vec<Scalar> reconstruct_U(const PayoffMatrix<Scalar>& a, const VecI64& row_counts) {
  Vec<Scalar> u = Vec<Scalar>::Zero(a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    if (row_counts[i] == 0) continue;
    for (int j = 0; j < a.cols(); ++j) u[j] += a.at(i, j) * Scalar(row_counts[i]);
  }
  return u;
}

template <class Scalar>
Vec<Scalar> reconstruct_V(const PayoffMatrix<Scalar>& a, const VecI64& col_counts) {
  Vec<Scalar> v = Vec<Scalar>::Zero(a.rows());
  for (int j = 0; j < a.cols(); ++j) {
    if (col_counts[j] == 0) continue;
    for (int i = 0; i < a.rows(); ++i) v[i] += a.at(i, j) * Scalar(col_counts[j]);
  }
  return v;
}

}  // namespace fpdyn
