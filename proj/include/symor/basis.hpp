#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "symor/spectral.hpp"

namespace symor {

enum class BasisMethod {
  pod_full,
  pod_separate,
  psd_cotangent_lift,
  psd_complex_svd,
  pod_of_ys,
  psd_greedy,
  psd_svd_like,
};

std::string_view to_string(BasisMethod m);
BasisMethod basis_method_from_string(std::string_view name);
const std::vector<BasisMethod>& all_basis_methods();
BasisKind kind_of(BasisMethod m);

// ||(I - V V^T) X||_F^2
double pod_loss(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x);
// ||(I - V V^+) X||_F^2
double psd_loss(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x, double tol = kProjectionTolerance);
// psd_loss for symplectic kinds, pod_loss otherwise.
double projection_error(const ReducedBasis& v, const Eigen::Ref<const Matrix>& x);

inline constexpr double kGapTolerance = 1e-13;

ReducedBasis pod_full(const Eigen::Ref<const Matrix>& x, Index size);
ReducedBasis pod_separate(const Eigen::Ref<const Matrix>& x, Index size);
ReducedBasis psd_cotangent_lift(const Eigen::Ref<const Matrix>& x, Index size);
ReducedBasis pod_of_ys(const Eigen::Ref<const Matrix>& x, Index size, double gap_tol = kGapTolerance);
ReducedBasis psd_complex_svd(const Eigen::Ref<const Matrix>& x, Index size, double gap_tol = kGapTolerance);

struct GreedyResult {
  ReducedBasis basis;
  std::vector<Index> picks;  // snapshot index chosen at each iteration
  Vector loss_history;       // psd_loss after each iteration
  bool early_stop = false;
};

GreedyResult psd_greedy_run(const Eigen::Ref<const Matrix>& x, Index size, double drop = kGramSchmidtDrop);
ReducedBasis psd_greedy(const Eigen::Ref<const Matrix>& x, Index size);

struct SvdLikeSelection {
  ReducedBasis basis;
  std::vector<Index> indices;  // selected positions in the weighted spectrum
  double neglected = 0.0;      // sum of squared neglected weights
};

// Top-k weights, ties broken towards the lower index.
std::vector<Index> select_top_weights(const Vector& w, Index k);
SvdLikeSelection select_svd_like(const SvdLikeFactors& f, const WeightedSpectrum& w, Index size);
ReducedBasis psd_svd_like(const Eigen::Ref<const Matrix>& x, Index size, const SvdLikeOptions& opts = {});

// Reusable generator: the expensive factorisation runs once, bases for
// several sizes are sliced from it.
class BasisGenerator {
 public:
  virtual ~BasisGenerator() = default;
  virtual ReducedBasis basis(Index size) const = 0;
  // Spectrum written next to the basis: singular values or weights.
  virtual Vector spectrum() const = 0;
  virtual Index max_size() const = 0;
  // Non-empty when the generator stopped short of the prepared size.
  virtual std::string warning() const { return {}; }
  // The underlying decomposition, for generators built on one.
  virtual const SvdLikeFactors* factors() const { return nullptr; }
};

struct BasisOptions {
  SvdLikeOptions svd_like;
  double gap_tolerance = kGapTolerance;
  double drop_tolerance = kGramSchmidtDrop;
};

// `prepared_size` bounds the sizes requested later (used by greedy).
std::unique_ptr<BasisGenerator> make_generator(BasisMethod m, const Matrix& x, Index prepared_size,
                                               const BasisOptions& opts = {});

ReducedBasis generate_basis(BasisMethod m, const Eigen::Ref<const Matrix>& x, Index size);

}  // namespace symor
