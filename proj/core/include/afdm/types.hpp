// types.hpp - shared aliases and small index helpers
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace afdm {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Euclidean remainder, result in [0, n) for any sign of a.
inline int mod_n(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace afdm
