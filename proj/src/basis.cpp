#include "symor/basis.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <numeric>
#include <string>

namespace symor {

namespace {

constexpr std::array<BasisMethod, 7> kMethods = {
    BasisMethod::pod_full,        BasisMethod::pod_separate, BasisMethod::psd_cotangent_lift,
    BasisMethod::psd_complex_svd, BasisMethod::pod_of_ys,    BasisMethod::psd_greedy,
    BasisMethod::psd_svd_like,
};

Index half_size(Index size) {
  if (size < 0 || size % 2 != 0) throw DimensionError("basis size must be even, got " + std::to_string(size));
  return size / 2;
}

void check_gap(const Vector& sv, Index keep, double tol, const char* who) {
  if (keep >= sv.size()) return;
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double kept = keep > 0 ? sv(keep - 1) : top;
  const double next = sv(keep);
  if (!(kept - next > tol * top))
    throw GapError(std::string(who) + ": no singular-value gap at truncation " + std::to_string(keep) + " (" +
                       std::to_string(kept) + " vs " + std::to_string(next) + ")",
                   kept, next);
}

Matrix lift(const Matrix& e) {
  Matrix v(e.rows(), 2 * e.cols());
  v << e, apply_poisson_transpose(e);
  return v;
}

class PodFull final : public BasisGenerator {
 public:
  explicit PodFull(const Matrix& x) {
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
    u_ = svd.matrixU();
    sv_ = svd.singularValues();
  }
  ReducedBasis basis(Index size) const override {
    half_size(size);
    if (size > u_.cols()) throw SizeError("pod_full: size " + std::to_string(size) + " exceeds available " +
                                          std::to_string(u_.cols()) + " singular vectors");
    return ReducedBasis(u_.leftCols(size), BasisKind::orthonormal);
  }
  Vector spectrum() const override { return sv_; }
  Index max_size() const override { return u_.cols() - u_.cols() % 2; }

 private:
  Matrix u_;
  Vector sv_;
};

class PodSeparate final : public BasisGenerator {
 public:
  explicit PodSeparate(const Matrix& x) {
    const Index n = half_dim(x.rows());
    Eigen::BDCSVD<Matrix> sq(x.topRows(n), Eigen::ComputeThinU);
    Eigen::BDCSVD<Matrix> sp(x.bottomRows(n), Eigen::ComputeThinU);
    uq_ = sq.matrixU();
    up_ = sp.matrixU();
    sv_.resize(sq.singularValues().size() + sp.singularValues().size());
    sv_ << sq.singularValues(), sp.singularValues();
  }
  ReducedBasis basis(Index size) const override {
    const Index k = half_size(size);
    if (k > std::min(uq_.cols(), up_.cols()))
      throw SizeError("pod_separate: size " + std::to_string(size) + " exceeds available singular vectors");
    const Index n = uq_.rows();
    Matrix v = Matrix::Zero(2 * n, 2 * k);
    v.topLeftCorner(n, k) = uq_.leftCols(k);
    v.bottomRightCorner(n, k) = up_.leftCols(k);
    return ReducedBasis(std::move(v), BasisKind::orthonormal);
  }
  Vector spectrum() const override { return sv_; }
  Index max_size() const override { return 2 * std::min(uq_.cols(), up_.cols()); }

 private:
  Matrix uq_, up_;
  Vector sv_;
};

class CotangentLift final : public BasisGenerator {
 public:
  explicit CotangentLift(const Matrix& x) {
    const Index n = half_dim(x.rows());
    Matrix lifted(n, 2 * x.cols());
    lifted << x.topRows(n), x.bottomRows(n);
    Eigen::BDCSVD<Matrix> svd(lifted, Eigen::ComputeThinU);
    phi_ = svd.matrixU();
    sv_ = svd.singularValues();
  }
  ReducedBasis basis(Index size) const override {
    const Index k = half_size(size);
    if (k > phi_.cols()) throw SizeError("psd_cotangent_lift: size " + std::to_string(size) + " too large");
    const Index n = phi_.rows();
    Matrix e = Matrix::Zero(2 * n, k);
    e.topRows(n) = phi_.leftCols(k);
    return ReducedBasis(lift(e), BasisKind::orthonormal_symplectic);
  }
  Vector spectrum() const override { return sv_; }
  Index max_size() const override { return 2 * phi_.cols(); }

 private:
  Matrix phi_;
  Vector sv_;
};

class PodOfYs final : public BasisGenerator {
 public:
  PodOfYs(const Matrix& x, double gap_tol) : gap_tol_(gap_tol) {
    Matrix ys(x.rows(), 2 * x.cols());
    ys << x, apply_poisson(x);
    Eigen::BDCSVD<Matrix> svd(ys, Eigen::ComputeThinU);
    u_ = svd.matrixU();
    sv_ = svd.singularValues();
  }
  ReducedBasis basis(Index size) const override {
    const Index k = half_size(size);
    if (size > u_.cols()) throw SizeError("pod_of_ys: size " + std::to_string(size) + " too large");
    check_gap(sv_, size, gap_tol_, "pod_of_ys");
    // Pair each kept left singular vector u with J^T u; vectors already in
    // the span of earlier pairs are skipped.
    Matrix e(u_.rows(), 0);
    for (Index c = 0; c < size && e.cols() < k; ++c) extend_isotropic_block(e, u_.col(c), 1e-6);
    if (e.cols() != k)
      throw GapError("pod_of_ys: leading singular vectors do not pair up at size " + std::to_string(size),
                     sv_(size - 1), size < sv_.size() ? sv_(size) : 0.0);
    return ReducedBasis(lift(e), BasisKind::orthonormal_symplectic);
  }
  Vector spectrum() const override { return sv_; }
  Index max_size() const override { return u_.cols() - u_.cols() % 2; }

 private:
  Matrix u_;
  Vector sv_;
  double gap_tol_;
};

class ComplexSvd final : public BasisGenerator {
 public:
  ComplexSvd(const Matrix& x, double gap_tol) : gap_tol_(gap_tol) {
    const Index n = half_dim(x.rows());
    Eigen::MatrixXcd cs(n, x.cols());
    cs.real() = x.topRows(n);
    cs.imag() = x.bottomRows(n);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(cs, Eigen::ComputeThinU);
    u_ = svd.matrixU();
    sv_ = svd.singularValues();
  }
  ReducedBasis basis(Index size) const override {
    const Index k = half_size(size);
    if (k > u_.cols()) throw SizeError("psd_complex_svd: size " + std::to_string(size) + " too large");
    check_gap(sv_, k, gap_tol_, "psd_complex_svd");
    const Index n = u_.rows();
    Matrix e(2 * n, k);
    e.topRows(n) = u_.leftCols(k).real();
    e.bottomRows(n) = u_.leftCols(k).imag();
    return ReducedBasis(lift(e), BasisKind::orthonormal_symplectic);
  }
  Vector spectrum() const override { return sv_; }
  Index max_size() const override { return 2 * u_.cols(); }

 private:
  Eigen::MatrixXcd u_;
  Vector sv_;
  double gap_tol_;
};

class Greedy final : public BasisGenerator {
 public:
  Greedy(const Matrix& x, Index prepared, double drop) : run_(psd_greedy_run(x, prepared, drop)) {}
  ReducedBasis basis(Index size) const override {
    const Index k = std::min(half_size(size), run_.basis.half_rank());
    const Matrix& v = run_.basis.matrix();
    const Index h = run_.basis.half_rank();
    Matrix out(v.rows(), 2 * k);
    out << v.leftCols(k), v.middleCols(h, k);
    return ReducedBasis(std::move(out), BasisKind::orthonormal_symplectic);
  }
  Vector spectrum() const override { return run_.loss_history; }
  Index max_size() const override { return run_.basis.size(); }
  std::string warning() const override {
    if (!run_.early_stop) return {};
    return "psd_greedy stopped early at size " + std::to_string(run_.basis.size());
  }

 private:
  GreedyResult run_;
};

class SvdLike final : public BasisGenerator {
 public:
  SvdLike(const Matrix& x, const SvdLikeOptions& opts)
      : f_(svd_like_decompose(x, opts)), w_(weighted_spectrum(f_)) {}
  ReducedBasis basis(Index size) const override { return select_svd_like(f_, w_, size).basis; }
  Vector spectrum() const override { return w_.weights; }
  Index max_size() const override { return 2 * (f_.num_pairs + f_.num_units); }
  const SvdLikeFactors* factors() const override { return &f_; }

 private:
  SvdLikeFactors f_;
  WeightedSpectrum w_;
};

}  // namespace

std::string_view to_string(BasisMethod m) {
  switch (m) {
    case BasisMethod::pod_full: return "pod_full";
    case BasisMethod::pod_separate: return "pod_separate";
    case BasisMethod::psd_cotangent_lift: return "psd_cotangent_lift";
    case BasisMethod::psd_complex_svd: return "psd_complex_svd";
    case BasisMethod::pod_of_ys: return "pod_of_ys";
    case BasisMethod::psd_greedy: return "psd_greedy";
    case BasisMethod::psd_svd_like: return "psd_svd_like";
  }
  return "unknown";
}

BasisMethod basis_method_from_string(std::string_view name) {
  for (auto m : kMethods)
    if (to_string(m) == name) return m;
  throw ConfigError("unknown basis method '" + std::string(name) + "'");
}

const std::vector<BasisMethod>& all_basis_methods() {
  static const std::vector<BasisMethod> all(kMethods.begin(), kMethods.end());
  return all;
}

BasisKind kind_of(BasisMethod m) {
  switch (m) {
    case BasisMethod::pod_full:
    case BasisMethod::pod_separate: return BasisKind::orthonormal;
    case BasisMethod::psd_svd_like: return BasisKind::symplectic;
    default: return BasisKind::orthonormal_symplectic;
  }
}

double pod_loss(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x) {
  if (x.rows() != v.full_dim()) throw DimensionError("pod_loss: basis and data row counts differ");
  if (v.size() == 0) return x.squaredNorm();
  return (x - v.matrix() * (v.matrix().transpose() * x)).squaredNorm();
}

double psd_loss(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x, double tol) {
  return (x - symplectic_projection(v, x, tol)).squaredNorm();
}

double projection_error(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x) {
  return v.symplectic() ? psd_loss(v, x) : pod_loss(v, x);
}

ReducedBasis pod_full(const Eigen::Ref<const Matrix>& x, Index size) { return PodFull(x).basis(size); }
ReducedBasis pod_separate(const Eigen::Ref<const Matrix>& x, Index size) { return PodSeparate(x).basis(size); }
ReducedBasis psd_cotangent_lift(const Eigen::Ref<const Matrix>& x, Index size) {
  return CotangentLift(x).basis(size);
}
ReducedBasis pod_of_ys(const Eigen::Ref<const Matrix>& x, Index size, double gap_tol) {
  return PodOfYs(x, gap_tol).basis(size);
}
ReducedBasis psd_complex_svd(const Eigen::Ref<const Matrix>& x, Index size, double gap_tol) {
  return ComplexSvd(x, gap_tol).basis(size);
}

GreedyResult psd_greedy_run(const Eigen::Ref<const Matrix>& x, Index size, double drop) {
  const Index k = half_size(size);
  half_dim(x.rows());
  GreedyResult out;
  Matrix e(x.rows(), 0);
  Matrix r = x;
  double ref = 0.0;
  for (Index c = 0; c < x.cols(); ++c) ref = std::max(ref, x.col(c).norm());
  std::vector<double> losses;
  while (e.cols() < k) {
    Index pick = -1;
    double best = 0.0;
    for (Index c = 0; c < r.cols(); ++c) {
      const double nc = r.col(c).norm();
      if (nc > best) {
        best = nc;
        pick = c;
      }
    }
    if (pick < 0 || !(best > drop * ref) || !extend_isotropic_block(e, r.col(pick), drop)) {
      out.early_stop = true;
      break;
    }
    out.picks.push_back(pick);
    // Orthosymplectic pair: the symplectic projector is the orthogonal one.
    const Vector a = e.col(e.cols() - 1);
    const Vector b = apply_poisson_transpose(a);
    r -= a * (a.transpose() * r);
    r -= b * (b.transpose() * r);
    losses.push_back(r.squaredNorm());
  }
  out.loss_history = Eigen::Map<Vector>(losses.data(), static_cast<Index>(losses.size()));
  out.basis = ReducedBasis(lift(e), BasisKind::orthonormal_symplectic);
  return out;
}

ReducedBasis psd_greedy(const Eigen::Ref<const Matrix>& x, Index size) { return psd_greedy_run(x, size).basis; }

std::vector<Index> select_top_weights(const Vector& w, Index k) {
  if (k < 0 || k > w.size())
    throw SizeError("requested " + std::to_string(k) + " pairs but only " + std::to_string(w.size()) + " exist");
  std::vector<Index> idx(static_cast<std::size_t>(w.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return w(a) > w(b); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

SvdLikeSelection select_svd_like(const SvdLikeFactors& f, const WeightedSpectrum& w, Index size) {
  const Index k = half_size(size);
  if (k > f.num_pairs + f.num_units)
    throw SizeError("psd_svd_like: size " + std::to_string(size) + " needs " + std::to_string(k) +
                    " pairs, decomposition has " + std::to_string(f.num_pairs + f.num_units));
  SvdLikeSelection out;
  out.indices = select_top_weights(w.weights, k);
  const Index n = f.half_dim();
  Matrix v(2 * n, 2 * k);
  std::vector<bool> chosen(static_cast<std::size_t>(w.weights.size()), false);
  for (Index j = 0; j < k; ++j) {
    const Index i = out.indices[static_cast<std::size_t>(j)];
    chosen[static_cast<std::size_t>(i)] = true;
    v.col(j) = f.s.col(i);
    v.col(k + j) = f.s.col(n + i);
  }
  for (Index i = 0; i < w.weights.size(); ++i)
    if (!chosen[static_cast<std::size_t>(i)]) out.neglected += w.weights(i) * w.weights(i);
  out.basis = ReducedBasis(std::move(v), BasisKind::symplectic);
  return out;
}

ReducedBasis psd_svd_like(const Eigen::Ref<const Matrix>& x, Index size, const SvdLikeOptions& opts) {
  const SvdLikeFactors f = svd_like_decompose(x, opts);
  return select_svd_like(f, weighted_spectrum(f), size).basis;
}

std::unique_ptr<BasisGenerator> make_generator(BasisMethod m, const Matrix& x, Index prepared_size,
                                               const BasisOptions& opts) {
  switch (m) {
    case BasisMethod::pod_full: return std::make_unique<PodFull>(x);
    case BasisMethod::pod_separate: return std::make_unique<PodSeparate>(x);
    case BasisMethod::psd_cotangent_lift: return std::make_unique<CotangentLift>(x);
    case BasisMethod::psd_complex_svd: return std::make_unique<ComplexSvd>(x, opts.gap_tolerance);
    case BasisMethod::pod_of_ys: return std::make_unique<PodOfYs>(x, opts.gap_tolerance);
    case BasisMethod::psd_greedy: return std::make_unique<Greedy>(x, prepared_size, opts.drop_tolerance);
    case BasisMethod::psd_svd_like: return std::make_unique<SvdLike>(x, opts.svd_like);
  }
  throw ConfigError("unknown basis method");
}

ReducedBasis generate_basis(BasisMethod m, const Eigen::Ref<const Matrix>& x, Index size) {
  return make_generator(m, x, size)->basis(size);
}

}  // namespace symor
