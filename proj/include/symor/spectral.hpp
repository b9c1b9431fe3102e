#pragma once

#include <optional>
#include <vector>

#include "symor/symplectic.hpp"

namespace symor {

struct TruncatedSvd {
  Matrix u;
  Vector sigma;
  Matrix vt;
};

// Leading `rank` singular triplets of b (full SVD underneath).
TruncatedSvd truncated_svd(const Eigen::Ref<const Matrix>& b, Index rank);

// All min(a, b) singular values, descending.
Vector singular_values(const Eigen::Ref<const Matrix>& b);

struct SvdLikeOptions {
  // Relative to the largest singular value of B: decides rank(B).
  double rank_tolerance = 1e-10;
  // A level of the deflation accepts the pairs whose eigenvalue magnitude is
  // above this fraction of the level's largest one.
  double level_tolerance = 1e-8;
  // Pairs whose eigenvalue magnitude is below this fraction of the squared
  // spectral norm of the level's data are treated as isotropic.
  double isotropy_tolerance = 1e-10;
  double reconstruction_tolerance = 1e-8;
  double structure_tolerance = 1e-6;
  int max_levels = 64;
};

// B = S D Q with S symplectic (2n x 2n), Q orthogonal (m x m) and D holding
// sigma_s at (i, i) and (n+i, p+q+i) for i < p and ones at (p+j, p+j) for j < q.
struct SvdLikeFactors {
  Matrix s;
  Matrix q;
  Vector sigma;
  Index num_pairs = 0;
  Index num_units = 0;
  Index cols = 0;
  int levels = 0;
  double residual = 0.0;

  Index half_dim() const { return s.rows() / 2; }
  Index rank() const { return 2 * num_pairs + num_units; }
  Matrix d() const;
};

SvdLikeFactors svd_like_decompose(const Eigen::Ref<const Matrix>& b, const SvdLikeOptions& opts = {});

// Descending symplectic singular values of b.
Vector symplectic_singular_values(const Eigen::Ref<const Matrix>& b, const SvdLikeOptions& opts = {});

struct WeightedSpectrum {
  Vector weights;
  // Row i: (||s_i||, ||s_{n+i}||) for pairs, (||s_{p+j}||, 0) for unit columns.
  Matrix column_norm_pairs;
};

WeightedSpectrum weighted_spectrum(const SvdLikeFactors& f);

inline constexpr double kGramSchmidtDrop = 1e-10;

struct GramSchmidtResult {
  ReducedBasis basis;
  std::vector<Index> skipped;
};

// Appends one J-orthonormal direction to the E-block (2n x k) unless its
// norm after projection drops below drop * ||v||. Returns whether it was added.
bool extend_isotropic_block(Matrix& e, Vector v, double drop = kGramSchmidtDrop);

// J-orthonormalises `vectors` (columns) against the E-block of `seed` and
// returns V = [E, J^T E].
GramSchmidtResult symplectic_gram_schmidt(const Eigen::Ref<const Matrix>& vectors,
                                          const std::optional<ReducedBasis>& seed = std::nullopt,
                                          double drop = kGramSchmidtDrop);

}  // namespace symor
