#pragma once

// Exhaustive small-instance oracle: enumerates every reachable (U, V) state
// of the identity-game dynamic up to a step bound, by breadth-first search
// with deduplication. Deliberately independent of the engine: it re-derives
// the best-response conditions from scratch on plain arrays.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace fpdyn::oracle {

using State = std::vector<std::int8_t>;  // U concatenated with V, components <= t_max

class Enumeration {
 public:
  Enumeration(int n, int t_max) : n_(n) {
    levels_.resize(static_cast<std::size_t>(t_max) + 1);
    max_gap_.resize(static_cast<std::size_t>(t_max) + 1, 0);
    levels_[0].insert(State(static_cast<std::size_t>(2 * n), 0));
    for (int t = 0; t < t_max; ++t) {
      for (const State& s : levels_[t]) {
        std::vector<int> rows, cols;
        const std::int8_t max_v = *std::max_element(s.begin() + n_, s.end());
        const std::int8_t min_u = *std::min_element(s.begin(), s.begin() + n_);
        for (int k = 0; k < n_; ++k) {
          if (s[static_cast<std::size_t>(n_ + k)] == max_v) rows.push_back(k);
          if (s[static_cast<std::size_t>(k)] == min_u) cols.push_back(k);
        }
        for (int i : rows) {
          for (int j : cols) {
            State next = s;
            ++next[static_cast<std::size_t>(i)];       // U_i
            ++next[static_cast<std::size_t>(n_ + j)];  // V_j
            levels_[t + 1].insert(std::move(next));
          }
        }
      }
      for (const State& s : levels_[t + 1]) {
        const int g = *std::max_element(s.begin() + n_, s.end()) -
                      *std::min_element(s.begin(), s.begin() + n_);
        max_gap_[t + 1] = std::max(max_gap_[t + 1], g);
      }
    }
  }

  bool reachable(int t, const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v) const {
    State s;
    s.reserve(static_cast<std::size_t>(2 * n_));
    for (std::int64_t x : u) s.push_back(static_cast<std::int8_t>(x));
    for (std::int64_t x : v) s.push_back(static_cast<std::int8_t>(x));
    return levels_[static_cast<std::size_t>(t)].count(s) > 0;
  }

  int max_gap(int t) const { return max_gap_[static_cast<std::size_t>(t)]; }
  std::size_t state_count(int t) const { return levels_[static_cast<std::size_t>(t)].size(); }

 private:
  int n_;
  std::vector<std::set<State>> levels_;
  std::vector<int> max_gap_;
};

}  // namespace fpdyn::oracle
