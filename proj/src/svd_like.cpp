#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "symor/spectral.hpp"

namespace symor {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

struct PairSet {
  Matrix right_a;  // right vectors of the first column of each pair (m x p)
  Matrix right_b;
  Vector lambda;
};

// Conjugate pairs of i*M for skew-symmetric M. Each accepted eigenvalue
// lambda > 0 with eigenvector x + iy yields M x = lambda y, M y = -lambda x;
// the returned columns are a = sqrt(2) y, b = sqrt(2) x so that a^T M b = lambda.
PairSet skew_pairs(const Matrix& m, double level_tol, double abs_floor) {
  PairSet out;
  const Index d = m.rows();
  out.right_a.resize(d, 0);
  out.right_b.resize(d, 0);
  out.lambda.resize(0);
  if (d < 2) return out;
  const ComplexMatrix h = std::complex<double>(0.0, 1.0) * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const Vector& ev = eig.eigenvalues();
  const double lmax = ev(d - 1);
  if (!(lmax > 0.0)) return out;
  std::vector<Index> keep;
  for (Index i = d - 1; i >= 0; --i) {
    if (ev(i) > level_tol * lmax && ev(i) > abs_floor) keep.push_back(i);
    else break;
  }
  // Guard against the positive half overrunning the spectrum.
  if (static_cast<Index>(keep.size()) > d / 2) keep.resize(d / 2);
  const Index k = static_cast<Index>(keep.size());
  out.right_a.resize(d, k);
  out.right_b.resize(d, k);
  out.lambda.resize(k);
  const double r2 = std::sqrt(2.0);
  for (Index j = 0; j < k; ++j) {
    const auto z = eig.eigenvectors().col(keep[j]);
    out.right_a.col(j) = r2 * z.imag();
    out.right_b.col(j) = r2 * z.real();
    out.lambda(j) = ev(keep[j]);
  }
  return out;
}

// Orthonormal basis of the orthogonal complement of span(a) inside R^rows.
Matrix orthogonal_complement(const Matrix& a) {
  const Index rows = a.rows();
  if (a.cols() == 0) return Matrix::Identity(rows, rows);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix full = qr.householderQ() * Matrix::Identity(rows, rows);
  return full.rightCols(rows - a.cols());
}

// y <- y - sum_i P_i y for the symplectic pairs (a_i, b_i), a_i^T J b_i = 1.
void remove_pairs(const Matrix& a, const Matrix& b, Eigen::Ref<Matrix> y) {
  if (a.cols() == 0) return;
  const Matrix jy = apply_poisson(y);
  const Matrix ca = b.transpose() * jy;
  const Matrix cb = a.transpose() * jy;
  y += a * ca;
  y -= b * cb;
}

}  // namespace

Matrix SvdLikeFactors::d() const {
  const Index n = half_dim();
  Matrix out = Matrix::Zero(2 * n, cols);
  const Index p = num_pairs;
  const Index q = num_units;
  for (Index i = 0; i < p; ++i) {
    out(i, i) = sigma(i);
    out(n + i, p + q + i) = sigma(i);
  }
  for (Index j = 0; j < q; ++j) out(p + j, p + j) = 1.0;
  return out;
}

SvdLikeFactors svd_like_decompose(const Eigen::Ref<const Matrix>& b, const SvdLikeOptions& opts) {
  const Index n = half_dim(b.rows());
  const Index m = b.cols();
  if (m < 1) throw DimensionError("svd_like_decompose: need at least one column");

  SvdLikeFactors f;
  f.cols = m;

  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double s1 = sv.size() > 0 ? sv(0) : 0.0;
  Index r = 0;
  while (r < sv.size() && sv(r) > opts.rank_tolerance * s1) ++r;

  if (r == 0) {
    f.s = Matrix::Identity(2 * n, 2 * n);
    f.q = Matrix::Identity(m, m);
    f.sigma.resize(0);
    f.residual = b.norm() / std::max(1.0, b.norm());
    return f;
  }

  // Row space of B; the null directions of the right factor go last in Q.
  const Matrix w_row = svd.matrixV().leftCols(r);
  const Matrix c0 = svd.matrixU().leftCols(r) * sv.head(r).asDiagonal();

  // Deflation over J-complements of the accepted pairs.
  Matrix pa(2 * n, 0), pb(2 * n, 0);  // pinned columns s_i and s_{n+i}, unscaled c/sigma
  Matrix qa(m, 0), qb(m, 0);          // matching right vectors
  std::vector<double> lam;
  Matrix basis = Matrix::Identity(r, r);  // current right subspace inside the row space
  int level = 0;
  while (basis.cols() >= 2 && level < opts.max_levels) {
    const Matrix c = c0 * basis;
    const Matrix mm = c.transpose() * apply_poisson(c);
    const Matrix skew = 0.5 * (mm - mm.transpose());
    const double cmax = singular_values(c)(0);
    const PairSet ps = skew_pairs(skew, opts.level_tolerance, opts.isotropy_tolerance * cmax * cmax);
    if (ps.lambda.size() == 0) break;
    ++level;
    const Index k = ps.lambda.size();
    const Index old = pa.cols();
    pa.conservativeResize(Eigen::NoChange, old + k);
    pb.conservativeResize(Eigen::NoChange, old + k);
    qa.conservativeResize(Eigen::NoChange, old + k);
    qb.conservativeResize(Eigen::NoChange, old + k);
    for (Index j = 0; j < k; ++j) {
      const double sig = std::sqrt(ps.lambda(j));
      pa.col(old + j) = c * ps.right_a.col(j) / sig;
      pb.col(old + j) = c * ps.right_b.col(j) / sig;
      qa.col(old + j) = w_row * (basis * ps.right_a.col(j));
      qb.col(old + j) = w_row * (basis * ps.right_b.col(j));
      lam.push_back(ps.lambda(j));
    }
    Matrix acc(basis.cols(), 2 * k);
    acc << ps.right_a, ps.right_b;
    basis = basis * orthogonal_complement(acc);
  }
  f.levels = level;

  Index p = pa.cols();
  Vector sig(p);
  for (Index i = 0; i < p; ++i) sig(i) = std::sqrt(lam[static_cast<std::size_t>(i)]);

  // Symplectic re-orthogonalisation sweep of the pinned pairs in discovery
  // order; rescaling keeps sigma_i * s_i fixed.
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < p; ++j) {
      Matrix ab(2 * n, 2);
      ab << pa.col(j), pb.col(j);
      remove_pairs(pa.leftCols(j), pb.leftCols(j), ab);
      const double omega = ab.col(0).dot(apply_poisson(Vector(ab.col(1))));
      if (!(omega > 0.0)) throw DecompositionError("svd_like_decompose: pair lost orientation", INFINITY);
      const double sc = std::sqrt(omega);
      pa.col(j) = ab.col(0) / sc;
      pb.col(j) = ab.col(1) / sc;
      sig(j) *= sc;
    }
  }

  // Isotropic remainder: unit columns of D.
  Matrix units(2 * n, 0);
  Matrix q_units(m, 0), q_rest(m, 0);
  {
    const Matrix c = c0 * basis;
    Index q = 0;
    Matrix wrest;
    if (c.cols() > 0) {
      Eigen::BDCSVD<Matrix> rs(c, Eigen::ComputeThinU | Eigen::ComputeFullV);
      const Vector& rv = rs.singularValues();
      while (q < rv.size() && rv(q) > opts.rank_tolerance * s1) ++q;
      // A unit column of norm s forces a partner of norm >= 1/s, and S^T J S
      // then carries rounding of order eps / s^2. Trailing units below that
      // limit go to the residual while the reconstruction budget allows.
      const double partner_cap = std::sqrt(opts.structure_tolerance / std::numeric_limits<double>::epsilon());
      const double budget = 0.5 * opts.reconstruction_tolerance * std::max(1.0, b.norm());
      double dropped = 0.0;
      while (q > 0 && rv(q - 1) * partner_cap < 1.0 && dropped + rv(q - 1) * rv(q - 1) <= budget * budget) {
        dropped += rv(q - 1) * rv(q - 1);
        --q;
      }
      units = rs.matrixU().leftCols(q) * rv.head(q).asDiagonal();
      q_units = w_row * (basis * rs.matrixV().leftCols(q));
      wrest = basis * rs.matrixV().rightCols(c.cols() - q);
    } else {
      wrest.resize(r, 0);
    }
    remove_pairs(pa, pb, units);
    q_rest.resize(m, wrest.cols() + (m - r));
    q_rest << w_row * wrest, svd.matrixV().rightCols(m - r);
  }
  const Index q = units.cols();
  if (p + q > n) throw DecompositionError("svd_like_decompose: more pairs than half dimension", INFINITY);

  // Partners for the unit columns: E^T J F = I, F^T J F = 0, F J-orthogonal to the pairs.
  Matrix partners(2 * n, q);
  if (q > 0) {
    Eigen::HouseholderQR<Matrix> qr(units);
    const Matrix qe = qr.householderQ() * Matrix::Identity(2 * n, q);
    const Matrix re = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
    // F0 = J^T Qe Re^{-T}
    const Matrix re_inv = re.triangularView<Eigen::Upper>().solve(Matrix::Identity(q, q));
    partners = apply_poisson_transpose(qe) * re_inv.transpose();
    remove_pairs(pa, pb, partners);
    const Matrix e_jf = units.transpose() * apply_poisson(partners);
    partners = partners * e_jf.inverse();
    const Matrix a = partners.transpose() * apply_poisson(partners);
    partners += units * (0.5 * a);
  }

  // Complete to a full symplectic S on the J-complement of the pinned columns.
  const Index rest = n - p - q;
  Matrix ca(2 * n, rest), cb(2 * n, rest);
  if (rest > 0) {
    Matrix cur(2 * n, 2 * (p + q));
    cur << pa, units, pb, partners;
    const Matrix nc = orthogonal_complement(apply_poisson_transpose(cur));
    const Matrix a = nc.transpose() * apply_poisson(nc);
    const PairSet ps = skew_pairs(0.5 * (a - a.transpose()), 0.0, 0.0);
    if (ps.lambda.size() != rest)
      throw DecompositionError("svd_like_decompose: symplectic completion failed", INFINITY);
    for (Index j = 0; j < rest; ++j) {
      const double sc = std::sqrt(ps.lambda(j));
      ca.col(j) = nc * ps.right_a.col(j) / sc;
      cb.col(j) = nc * ps.right_b.col(j) / sc;
    }
  }

  // Stable descending order of sigma.
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return sig(x) > sig(y); });

  f.s.resize(2 * n, 2 * n);
  f.q.resize(m, m);
  f.sigma.resize(p);
  for (Index i = 0; i < p; ++i) {
    const Index o = order[static_cast<std::size_t>(i)];
    f.sigma(i) = sig(o);
    f.s.col(i) = pa.col(o);
    f.s.col(n + i) = pb.col(o);
    f.q.row(i) = qa.col(o).transpose();
    f.q.row(p + q + i) = qb.col(o).transpose();
  }
  for (Index j = 0; j < q; ++j) {
    f.s.col(p + j) = units.col(j);
    f.s.col(n + p + j) = partners.col(j);
    f.q.row(p + j) = q_units.col(j).transpose();
  }
  for (Index j = 0; j < rest; ++j) {
    f.s.col(p + q + j) = ca.col(j);
    f.s.col(n + p + q + j) = cb.col(j);
  }
  f.q.bottomRows(m - 2 * p - q) = q_rest.transpose();
  f.num_pairs = p;
  f.num_units = q;

  const double bn = b.norm();
  f.residual = (f.s * f.d() * f.q - b).norm() / std::max(1.0, bn);
  if (!(f.residual <= opts.reconstruction_tolerance))
    throw DecompositionError("svd_like_decompose: reconstruction residual " + std::to_string(f.residual) +
                                 " above tolerance",
                             f.residual);
  const double sm = symplecticity_measure(f.s);
  if (!(sm <= opts.structure_tolerance * std::sqrt(static_cast<double>(2 * n))))
    throw DecompositionError("svd_like_decompose: symplectic factor off by " + std::to_string(sm),
                             f.residual);
  return f;
}

Vector symplectic_singular_values(const Eigen::Ref<const Matrix>& b, const SvdLikeOptions& opts) {
  half_dim(b.rows());
  if (b.cols() == 0) return Vector(0);
  return svd_like_decompose(b, opts).sigma;
}

}  // namespace symor
