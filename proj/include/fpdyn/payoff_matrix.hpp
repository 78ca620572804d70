#pragma once

#include <stdexcept>
#include <vector>

#include "fpdyn/scalars.hpp"

namespace fpdyn {

/// An m-by-n payoff matrix for a two-player zero-sum game. Entry (i,j) is
/// what the column player pays the row player when they play i and j.
/// Identity matrices are tagged so the step kernels can use unit updates.
template <class Scalar>
class PayoffMatrix {
 public:
  PayoffMatrix(int rows, int cols, std::vector<Scalar> row_major_entries)
      : mat_(rows, cols), identity_(false) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("payoff matrix needs m >= 1, n >= 1");
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != row_major_entries.size())
      throw std::invalid_argument("payoff matrix entry count does not match m*n");
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) mat_(i, j) = row_major_entries[static_cast<std::size_t>(i) * cols + j];
  }

  explicit PayoffMatrix(Mat<Scalar> mat) : mat_(std::move(mat)), identity_(false) {
    if (mat_.rows() < 1 || mat_.cols() < 1) throw std::invalid_argument("payoff matrix needs m >= 1, n >= 1");
  }

  static PayoffMatrix identity(int n) {
    if (n < 1) throw std::invalid_argument("identity payoff matrix needs n >= 1");
    PayoffMatrix a{Mat<Scalar>::Identity(n, n)};
    a.identity_ = true;
    return a;
  }

  int rows() const { return static_cast<int>(mat_.rows()); }
  int cols() const { return static_cast<int>(mat_.cols()); }
  bool is_identity() const { return identity_; }
  const Mat<Scalar>& entries() const { return mat_; }
  const Scalar& at(int i, int j) const { return mat_(i, j); }

 private:
  Mat<Scalar> mat_;
  bool identity_;
};

}  // namespace fpdyn
