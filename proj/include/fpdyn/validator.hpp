#pragma once

// Certification of traces: replay from zero vectors with scripted-step
// checking, plus the structural identities that hold on identity games.
// Validation never trusts annotations; everything is recomputed from the
// steps themselves.

#include <map>
#include <optional>
#include <string>

#include "fpdyn/engine.hpp"
#include "fpdyn/trace.hpp"

namespace fpdyn {

struct ValidationReport {
  bool ok = true;
  std::int64_t steps_checked = 0;
  std::optional<InvalidChoice> first_violation;
  std::map<std::string, bool> structural_checks;

  std::string summary() const;
  std::string to_json() const;  // field names: ok, stepsChecked, firstViolation, structuralChecks
};

template <class Scalar>
ValidationReport validate_trace(const PayoffMatrix<Scalar>& a, const Trace& trace,
                                const EngineOptions& opts = {}) {
  if (trace.header.matrix.m != a.rows() || trace.header.matrix.n != a.cols())
    throw std::invalid_argument("trace header dimensions do not match the matrix");
  if (trace.header.matrix.kind == MatrixDescriptor::Kind::Identity && !a.is_identity())
    throw std::invalid_argument("trace header says identity but the matrix is not");

  ValidationReport rep;
  const bool identity = a.is_identity();
  if (identity) {
    rep.structural_checks["sum_U_equals_t"] = true;
    rep.structural_checks["sum_V_equals_t"] = true;
    rep.structural_checks["U_matches_row_counts"] = true;
    rep.structural_checks["V_matches_col_counts"] = true;
  }

  DynamicState<Scalar> st = DynamicState<Scalar>::zero(a);
  for (const Step& s : trace.steps) {
    if (auto violation = step_scripted(st, a, s.i, s.j, opts)) {
      rep.ok = false;
      rep.first_violation = std::move(*violation);
      return rep;
    }
    ++rep.steps_checked;
    if (identity) {
      Scalar sum_u{}, sum_v{};
      bool u_counts = true, v_counts = true;
      for (int k = 0; k < a.cols(); ++k) {
        sum_u += st.U[k];
        sum_v += st.V[k];
        u_counts = u_counts && st.U[k] == Scalar(st.row_counts[k]);
        v_counts = v_counts && st.V[k] == Scalar(st.col_counts[k]);
      }
      bool all_ok = true;
      const auto record = [&](const char* name, bool pass) {
        if (!pass) rep.structural_checks[name] = false;
        all_ok = all_ok && pass;
      };
      record("sum_U_equals_t", sum_u == Scalar(st.t));
      record("sum_V_equals_t", sum_v == Scalar(st.t));
      record("U_matches_row_counts", u_counts);
      record("V_matches_col_counts", v_counts);
      if (!all_ok) {
        rep.ok = false;
        return rep;
      }
    }
  }
  return rep;
}

/// Relabel every step of an identity-game trace by a common permutation of
/// the strategies; a valid input yields a valid output. sigma is 0-based:
/// strategy p becomes sigma[p].
Trace permute_trace(const Trace& trace, const std::vector<int>& sigma);

}  // namespace fpdyn
