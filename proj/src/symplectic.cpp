#include "symor/symplectic.hpp"

#include <cmath>

namespace symor {

Index half_dim(Index rows) {
  if (rows % 2 != 0)
    throw DimensionError("phase-space dimension must be even, got " + std::to_string(rows));
  return rows / 2;
}

Matrix apply_poisson_right(const Eigen::Ref<const Matrix>& x) {
  const Index k = half_dim(x.cols());
  Matrix y(x.rows(), x.cols());
  y.leftCols(k) = -x.rightCols(k);
  y.rightCols(k) = x.leftCols(k);
  return y;
}

Matrix poisson_matrix(Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

Matrix symplectic_inverse(const Eigen::Ref<const Matrix>& a) {
  const Index n = half_dim(a.rows());
  const Index m = half_dim(a.cols());
  Matrix r(2 * m, 2 * n);
  r.topLeftCorner(m, n) = a.bottomRightCorner(n, m).transpose();
  r.topRightCorner(m, n) = -a.topRightCorner(n, m).transpose();
  r.bottomLeftCorner(m, n) = -a.bottomLeftCorner(n, m).transpose();
  r.bottomRightCorner(m, n) = a.topLeftCorner(n, m).transpose();
  return r;
}

double symplecticity_measure(const Eigen::Ref<const Matrix>& v) {
  half_dim(v.rows());
  half_dim(v.cols());
  Matrix g = symplectic_inverse(v) * v;
  g.diagonal().array() -= 1.0;
  return g.norm();
}

double orthonormality_measure(const Eigen::Ref<const Matrix>& v) {
  half_dim(v.cols());
  Matrix g = v.transpose() * v;
  g.diagonal().array() -= 1.0;
  return g.norm();
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::orthonormal_symplectic: return "orthonormal_symplectic";
    case BasisKind::symplectic: return "symplectic";
    case BasisKind::orthonormal: return "orthonormal";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(std::string_view name) {
  if (name == "orthonormal_symplectic") return BasisKind::orthonormal_symplectic;
  if (name == "symplectic") return BasisKind::symplectic;
  if (name == "orthonormal") return BasisKind::orthonormal;
  throw ConfigError("unknown basis kind '" + std::string(name) + "'");
}

ReducedBasis::ReducedBasis(Matrix columns, BasisKind kind) : v_(std::move(columns)), kind_(kind) {
  half_dim(v_.rows());
  half_dim(v_.cols());
}

Matrix ReducedBasis::projection_rule() const {
  if (symplectic()) return symplectic_inverse(v_);
  return v_.transpose();
}

void ReducedBasis::validate(double tol) const {
  const double scale = tol * std::sqrt(static_cast<double>(std::max<Index>(v_.cols(), 1)));
  if (symplectic()) {
    const double s = symplecticity_measure(v_);
    if (!(s < scale))
      throw PreconditionError("basis tagged " + std::string(to_string(kind_)) +
                              " has symplecticity measure " + std::to_string(s));
  }
  if (orthonormal()) {
    const double o = orthonormality_measure(v_);
    if (!(o < scale))
      throw PreconditionError("basis tagged " + std::string(to_string(kind_)) +
                              " has orthonormality measure " + std::to_string(o));
  }
}

bool is_symplectic(const Eigen::Ref<const Matrix>& v, double tol) {
  return symplecticity_measure(v) < tol * std::sqrt(static_cast<double>(std::max<Index>(v.cols(), 1)));
}

Matrix symplectic_projection(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x, double tol) {
  if (x.rows() != v.full_dim())
    throw DimensionError("projection: basis has " + std::to_string(v.full_dim()) +
                         " rows, data has " + std::to_string(x.rows()));
  if (v.size() == 0) return Matrix::Zero(x.rows(), x.cols());
  if (!is_symplectic(v.matrix(), tol))
    throw PreconditionError("symplectic projection needs a symplectic basis, measure = " +
                            std::to_string(symplecticity_measure(v.matrix())));
  return v.matrix() * (symplectic_inverse(v.matrix()) * x);
}

}  // namespace symor
