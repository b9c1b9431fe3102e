#pragma once

#include <complex>
#include <random>

#include "symor/symplectic.hpp"

namespace testing_support {

using symor::Index;
using symor::Matrix;

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = d(gen);
  return m;
}

// [e_1..e_k, e_{n+1}..e_{n+k}]
inline Matrix canonical_sub_identity(Index n, Index k) {
  Matrix v = Matrix::Zero(2 * n, 2 * k);
  for (Index i = 0; i < k; ++i) {
    v(i, i) = 1.0;
    v(n + i, k + i) = 1.0;
  }
  return v;
}

inline Matrix dense_j(Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

// E = [Re U; Im U] for a complex orthonormal U (n x k): E^T E = I and E^T J E = 0.
inline Matrix isotropic_block(Index n, Index k, std::uint64_t seed) {
  const Matrix re = gaussian(n, k, seed);
  const Matrix im = gaussian(n, k, seed + 7919);
  Eigen::MatrixXcd z(n, k);
  z.real() = re;
  z.imag() = im;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  Matrix e(2 * n, k);
  e.topRows(n) = u.real();
  e.bottomRows(n) = u.imag();
  return e;
}

// [E, J^T E]
inline Matrix orthosymplectic(Index n, Index k, std::uint64_t seed) {
  const Matrix e = isotropic_block(n, k, seed);
  Matrix v(2 * n, 2 * k);
  v << e, dense_j(n).transpose() * e;
  return v;
}

}  // namespace testing_support
