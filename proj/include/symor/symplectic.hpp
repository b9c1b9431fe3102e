#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "symor/errors.hpp"

namespace symor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Kind classification threshold, scaled by sqrt(2k).
inline constexpr double kKindTolerance = 1e-8;
// Symplecticity required before a symplectic projection, scaled by sqrt(2k).
// Looser than kKindTolerance so that non-orthonormal bases whose pairs carry
// large column norms are still accepted.
inline constexpr double kProjectionTolerance = 1e-6;

// Half dimension of a phase-space object with `rows` rows.
Index half_dim(Index rows);

// J x for x = (q, p) stacked rowwise: returns (p, -q). Works columnwise.
template <typename Derived>
Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> apply_poisson(
    const Eigen::MatrixBase<Derived>& x) {
  const Index n = half_dim(x.rows());
  Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> y(x.rows(), x.cols());
  y.topRows(n) = x.bottomRows(n);
  y.bottomRows(n) = -x.topRows(n);
  return y;
}

// J^T x = (-p, q).
template <typename Derived>
Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> apply_poisson_transpose(
    const Eigen::MatrixBase<Derived>& x) {
  const Index n = half_dim(x.rows());
  Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> y(x.rows(), x.cols());
  y.topRows(n) = -x.bottomRows(n);
  y.bottomRows(n) = x.topRows(n);
  return y;
}

// x J, i.e. right multiplication acting on columns: (x J)[:, (a, b)] = (-x_b, x_a).
Matrix apply_poisson_right(const Eigen::Ref<const Matrix>& x);

// Dense J_{2n}. Only meant for small oracles and reduced-dimension operators.
Matrix poisson_matrix(Index n);

// A^+ = J_{2m}^T A^T J_{2n}, built from block transposes and sign flips.
Matrix symplectic_inverse(const Eigen::Ref<const Matrix>& a);

// ||J_{2k}^T V^T J_{2n} V - I||_F
double symplecticity_measure(const Eigen::Ref<const Matrix>& v);

// ||V^T V - I||_F
double orthonormality_measure(const Eigen::Ref<const Matrix>& v);

enum class BasisKind { orthonormal_symplectic, symplectic, orthonormal };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

class ReducedBasis {
 public:
  ReducedBasis() = default;
  ReducedBasis(Matrix columns, BasisKind kind);

  const Matrix& matrix() const { return v_; }
  BasisKind kind() const { return kind_; }
  Index half_rank() const { return v_.cols() / 2; }
  Index size() const { return v_.cols(); }
  Index full_dim() const { return v_.rows(); }
  bool symplectic() const { return kind_ != BasisKind::orthonormal; }
  bool orthonormal() const { return kind_ != BasisKind::symplectic; }

  // W^T of the projection rule: V^+ for symplectic kinds, V^T otherwise.
  Matrix projection_rule() const;

  // Throws PreconditionError if the measured structure contradicts the kind.
  void validate(double tol = kKindTolerance) const;

 private:
  Matrix v_;
  BasisKind kind_ = BasisKind::orthonormal;
};

bool is_symplectic(const Eigen::Ref<const Matrix>& v, double tol = kKindTolerance);

// P X with P = V V^+.
Matrix symplectic_projection(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x,
                             double tol = kProjectionTolerance);

}  // namespace symor
