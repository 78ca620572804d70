#pragma once

// Scalar and dense-type foundations. Everything numeric in the library is
// templated on a scalar type so the same code runs over checked 64-bit
// integers (fast lane for identity games), arbitrary-precision integers and
// rationals (boost::multiprecision), or IEEE doubles (random-game
// experiments with a tie tolerance).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace fpdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecI64 = Vec<std::int64_t>;

// Exact scalars compare with ==; floating scalars compare within eps.
template <class Scalar>
inline constexpr bool is_exact_scalar_v = !std::is_floating_point_v<Scalar>;

template <class Scalar>
bool tie_equal(const Scalar& a, const Scalar& b, double eps) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return std::abs(a - b) <= eps;
  } else {
    (void)eps;
    return a == b;
  }
}

template <class Scalar>
double to_double(const Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar> || std::is_integral_v<Scalar>) {
    return static_cast<double>(v);
  } else {
    return v.template convert_to<double>();
  }
}

// Exact rational view of a scalar value. Doubles convert exactly (every
// finite double is a dyadic rational).
template <class Scalar>
Rational to_rational(const Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
    return Rational(v);
  } else {
    return Rational(v);
  }
}

}  // namespace fpdyn
