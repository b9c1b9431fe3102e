#include "symor/spectral.hpp"

#include <cmath>

namespace symor {

TruncatedSvd truncated_svd(const Eigen::Ref<const Matrix>& b, Index rank) {
  const Index lim = std::min(b.rows(), b.cols());
  if (rank < 0 || rank > lim)
    throw DimensionError("truncated_svd: rank " + std::to_string(rank) + " exceeds min(a, b) = " +
                         std::to_string(lim));
  TruncatedSvd out;
  if (lim == 0 || rank == 0) {
    out.u = Matrix::Zero(b.rows(), rank);
    out.sigma = Vector::Zero(rank);
    out.vt = Matrix::Zero(rank, b.cols());
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU().leftCols(rank);
  out.sigma = svd.singularValues().head(rank);
  out.vt = svd.matrixV().leftCols(rank).transpose();
  return out;
}

Vector singular_values(const Eigen::Ref<const Matrix>& b) {
  if (b.size() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(b);
  return svd.singularValues();
}

WeightedSpectrum weighted_spectrum(const SvdLikeFactors& f) {
  const Index n = f.half_dim();
  const Index p = f.num_pairs;
  const Index q = f.num_units;
  WeightedSpectrum out;
  out.weights.resize(p + q);
  out.column_norm_pairs = Matrix::Zero(p + q, 2);
  for (Index i = 0; i < p; ++i) {
    const double a = f.s.col(i).norm();
    const double b = f.s.col(n + i).norm();
    out.column_norm_pairs(i, 0) = a;
    out.column_norm_pairs(i, 1) = b;
    out.weights(i) = f.sigma(i) * std::sqrt(a * a + b * b);
  }
  for (Index j = 0; j < q; ++j) {
    const double a = f.s.col(p + j).norm();
    out.column_norm_pairs(p + j, 0) = a;
    out.weights(p + j) = a;
  }
  return out;
}

bool extend_isotropic_block(Matrix& e, Vector v, double drop) {
  const double ref = v.norm();
  if (ref == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    if (e.cols() == 0) break;
    const Matrix je = apply_poisson_transpose(e);
    v -= e * (e.transpose() * v);
    v -= je * (je.transpose() * v);
  }
  const double nv = v.norm();
  if (!(nv > drop * ref)) return false;
  e.conservativeResize(e.rows(), e.cols() + 1);
  e.col(e.cols() - 1) = v / nv;
  return true;
}

GramSchmidtResult symplectic_gram_schmidt(const Eigen::Ref<const Matrix>& vectors,
                                          const std::optional<ReducedBasis>& seed, double drop) {
  const Index dim = vectors.rows();
  half_dim(dim);
  Matrix e(dim, 0);
  if (seed && seed->size() > 0) {
    if (seed->full_dim() != dim) throw DimensionError("gram-schmidt: seed dimension mismatch");
    if (seed->kind() != BasisKind::orthonormal_symplectic)
      throw PreconditionError("gram-schmidt: seed basis must be orthonormal-symplectic");
    e = seed->matrix().leftCols(seed->half_rank());
  }
  const Index seeded = e.cols();
  GramSchmidtResult out;
  for (Index c = 0; c < vectors.cols(); ++c) {
    if (!extend_isotropic_block(e, vectors.col(c), drop)) out.skipped.push_back(c);
  }
  if (vectors.cols() > 0 && e.cols() == seeded)
    throw EmptyExtensionError("gram-schmidt: every input vector lies in the span of the seed");
  Matrix v(dim, 2 * e.cols());
  v << e, apply_poisson_transpose(e);
  out.basis = ReducedBasis(std::move(v), BasisKind::orthonormal_symplectic);
  return out;
}

}  // namespace symor
