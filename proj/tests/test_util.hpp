#pragma once

#include <vector>

#include "fpdyn/constructions.hpp"
#include "fpdyn/engine.hpp"
#include "fpdyn/schedule.hpp"

namespace fpdyn::testutil {

// Unchecked replay of identity-game steps; assumes a valid schedule.
inline DynamicState<std::int64_t> replay_identity(int n, const std::vector<Step>& steps,
                                                  std::int64_t upto = -1) {
  const auto a = PayoffMatrix<std::int64_t>::identity(n);
  auto st = DynamicState<std::int64_t>::zero(a);
  const std::int64_t count = upto < 0 ? static_cast<std::int64_t>(steps.size()) : upto;
  for (std::int64_t k = 0; k < count; ++k) detail::apply_step(st, a, steps[k].i, steps[k].j);
  return st;
}

inline VecI64 make_vec(const std::vector<std::int64_t>& v) {
  VecI64 out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[k];
  return out;
}

// 1-based (i, j) pairs to 0-based steps, matching how schedules are printed.
inline std::vector<Step> steps_1based(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Step> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(Step{i - 1, j - 1});
  return out;
}

}  // namespace fpdyn::testutil
