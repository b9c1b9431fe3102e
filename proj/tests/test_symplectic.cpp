#include <doctest.h>

#include "support.hpp"
#include "symor/symplectic.hpp"

using namespace symor;

using namespace testing_support;

TEST_CASE("apply_poisson swaps blocks with a sign") {
  Vector v1(2);
  v1 << 3, 5;
  CHECK(apply_poisson(v1) == (Vector(2) << 5, -3).finished());
  Vector v2(4);
  v2 << 1, 2, 3, 4;
  CHECK(apply_poisson(v2) == (Vector(4) << 3, 4, -1, -2).finished());
  CHECK_THROWS_AS(apply_poisson(Vector::Ones(3)), DimensionError);
}

TEST_CASE("apply_poisson is skew, squares to -I and is inverted by its transpose") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Vector v = gaussian(12, 1, seed);
    CHECK(std::abs(v.dot(apply_poisson(v))) <= 1e-14 * v.squaredNorm());
    CHECK((apply_poisson(apply_poisson(v)) + v).norm() == 0.0);
    CHECK((apply_poisson_transpose(apply_poisson(v)) - v).norm() == 0.0);
  }
  const Matrix x = gaussian(8, 3, 11);
  CHECK((apply_poisson(x) - dense_j(4) * x).norm() == 0.0);
  CHECK((apply_poisson_right(x.transpose()) - x.transpose() * dense_j(4)).norm() == 0.0);
  CHECK((poisson_matrix(4) - dense_j(4)).norm() == 0.0);
}

TEST_CASE("symplectic_inverse examples") {
  CHECK((symplectic_inverse(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm() == 0.0);

  const Matrix j = dense_j(2);
  const Matrix jp = symplectic_inverse(j);
  CHECK((jp - j.transpose()).norm() < 1e-15);
  CHECK((jp * j - Matrix::Identity(4, 4)).norm() < 1e-15);

  Matrix a(2, 2);
  a << 2, 0, 0, 0.5;
  Matrix expect(2, 2);
  expect << 0.5, 0, 0, 2;
  CHECK((symplectic_inverse(a) - expect).norm() < 1e-15);
  CHECK((symplectic_inverse(a) * a - Matrix::Identity(2, 2)).norm() < 1e-15);

  CHECK_THROWS_AS(symplectic_inverse(Matrix::Zero(3, 2)), DimensionError);
  CHECK_THROWS_AS(symplectic_inverse(Matrix::Zero(4, 3)), DimensionError);
}

TEST_CASE("symplectic_inverse matches the dense formula") {
  const Matrix a = gaussian(10, 4, 3);
  const Matrix oracle = dense_j(2).transpose() * a.transpose() * dense_j(5);
  CHECK((symplectic_inverse(a) - oracle).norm() < 1e-13);
}

TEST_CASE("symplecticity_measure examples") {
  CHECK(symplecticity_measure(canonical_sub_identity(5, 2)) == 0.0);
  Matrix v = canonical_sub_identity(5, 2);
  v.col(1) *= 2.0;
  CHECK(symplecticity_measure(v) > 0.0);

  const Matrix g = gaussian(8, 2, 7);
  const Matrix oracle = dense_j(1).transpose() * g.transpose() * dense_j(4) * g - Matrix::Identity(2, 2);
  CHECK(symplecticity_measure(g) == doctest::Approx(oracle.norm()).epsilon(1e-12));
  CHECK_THROWS_AS(symplecticity_measure(Matrix::Zero(8, 3)), DimensionError);
}

TEST_CASE("orthonormality_measure examples") {
  Eigen::HouseholderQR<Matrix> qr(gaussian(10, 4, 5));
  const Matrix q = qr.householderQ() * Matrix::Identity(10, 4);
  CHECK(orthonormality_measure(q) < 1e-12);

  Matrix v = Matrix::Zero(6, 2);
  v(0, 0) = 2.0;
  v(3, 1) = 1.0;
  CHECK(orthonormality_measure(v) == 3.0);

  const Matrix g = gaussian(10, 4, 6);
  const double oracle = (g.transpose() * g - Matrix::Identity(4, 4)).norm();
  CHECK(orthonormality_measure(g) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("characterization of orthosymplectic bases") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix e = isotropic_block(7, 3, seed);
    Matrix v(14, 6);
    v << e, apply_poisson_transpose(e);
    CHECK(symplecticity_measure(v) < 1e-10);
    CHECK(orthonormality_measure(v) < 1e-10);
    CHECK((symplectic_inverse(v) - v.transpose()).norm() < 1e-10);
  }
}

TEST_CASE("symplectic inverse is a left inverse of symplectic matrices") {
  // Symplectic shear and scaling composed with an orthosymplectic basis.
  const Index n = 4;
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  Matrix sym = gaussian(n, n, 9);
  sym = (0.5 * (sym + sym.transpose())).eval();
  s.topRightCorner(n, n) = sym;
  Matrix d = Matrix::Identity(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 1.0 + i;
    d(n + i, n + i) = 1.0 / (1.0 + i);
  }
  const Matrix a = s * d * canonical_sub_identity(n, 2);
  REQUIRE(symplecticity_measure(a) < 1e-8);
  CHECK((symplectic_inverse(a) * a - Matrix::Identity(4, 4)).norm() < 1e-8);
  CHECK(is_symplectic(a));
  CHECK_FALSE(is_symplectic(gaussian(8, 4, 1)));
}

TEST_CASE("ReducedBasis kinds and validation") {
  const Matrix v = canonical_sub_identity(3, 1);
  const ReducedBasis b(v, BasisKind::orthonormal_symplectic);
  CHECK(b.half_rank() == 1);
  CHECK(b.size() == 2);
  CHECK(b.full_dim() == 6);
  CHECK(b.symplectic());
  CHECK(b.orthonormal());
  CHECK_NOTHROW(b.validate());
  CHECK((b.projection_rule() - v.transpose()).norm() == 0.0);

  CHECK_THROWS_AS(ReducedBasis(Matrix::Zero(6, 3), BasisKind::orthonormal), DimensionError);
  CHECK_THROWS_AS(ReducedBasis(gaussian(6, 2, 1), BasisKind::symplectic).validate(), PreconditionError);
  Matrix scaled = v;
  scaled.col(0) *= 2.0;
  scaled.col(1) *= 0.5;
  const ReducedBasis ns(scaled, BasisKind::symplectic);
  CHECK_NOTHROW(ns.validate());
  CHECK_THROWS_AS(ReducedBasis(scaled, BasisKind::orthonormal_symplectic).validate(), PreconditionError);

  for (auto k : {BasisKind::orthonormal_symplectic, BasisKind::symplectic, BasisKind::orthonormal})
    CHECK(basis_kind_from_string(to_string(k)) == k);
}

TEST_CASE("symplectic_projection examples") {
  const Index n = 5, k = 2;
  const Matrix e = isotropic_block(n, k, 21);
  Matrix v(2 * n, 2 * k);
  v << e, apply_poisson_transpose(e);
  const ReducedBasis b(v, BasisKind::orthonormal_symplectic);

  const Matrix in_span = v * gaussian(2 * k, 3, 2);
  CHECK((symplectic_projection(b, in_span) - in_span).norm() < 1e-10 * in_span.norm());

  // V^+ X = 0 exactly when V^T J X = 0; the kernel comes from a dense LU.
  Eigen::FullPivLU<Matrix> lu(v.transpose() * dense_j(n));
  const Matrix kernel = lu.kernel();
  REQUIRE(kernel.cols() == 2 * (n - k));
  CHECK(symplectic_projection(b, kernel).norm() < 1e-12);

  const Matrix x = gaussian(2 * n, 4, 3);
  const Matrix px = symplectic_projection(b, x);
  CHECK((symplectic_projection(b, px) - px).norm() < 1e-10 * px.norm());

  CHECK_THROWS_AS(symplectic_projection(ReducedBasis(gaussian(10, 4, 4), BasisKind::orthonormal), x),
                  PreconditionError);
}
