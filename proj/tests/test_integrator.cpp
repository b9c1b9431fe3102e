#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "symor/integrator.hpp"

using namespace symor;
using namespace testing_support;

namespace {

LinearHamiltonianSystem oscillator(Vector x0) {
  return LinearHamiltonianSystem({Matrix::Ones(1, 1)}, {1.0}, Vector::Ones(1), Vector::Zero(1),
                                 forcing_profile(ForcingKind::constant_tip, 0.0, 0.0), std::move(x0));
}

double max_oscillator_error(Index nt) {
  const TimeGrid grid{0.0, 2.0, nt};
  const Trajectory tr = implicit_midpoint_linear(oscillator(Vector::Unit(2, 0)), grid);
  double err = 0.0;
  for (Index i = 0; i < nt; ++i) {
    const double t = grid.time(i);
    Vector exact(2);
    exact << std::cos(t), -std::sin(t);
    err = std::max(err, (tr.states.col(i) - exact).lpNorm<Eigen::Infinity>());
  }
  return err;
}

LatticeSpec lattice(int nx, int ny) {
  LatticeSpec s;
  s.nx = nx;
  s.ny = ny;
  s.length = 3.0;
  return s;
}

// max_i |H_i - H_0| / max_i (|x^T H x| / 2 + |x^T h|)
double relative_drift(const LinearHamiltonianSystem& sys, const Trajectory& tr) {
  double scale = 0.0, drift = 0.0;
  const Matrix h = sys.hamiltonian_matrix();
  const double h0 = sys.hamiltonian(tr.states.col(0), tr.grid.time(0));
  for (Index i = 0; i < tr.states.cols(); ++i) {
    const Vector x = tr.states.col(i);
    const double t = tr.grid.time(i);
    scale = std::max(scale, 0.5 * std::abs(x.dot(h * x)) + std::abs(x.dot(sys.linear_term(t))));
    drift = std::max(drift, std::abs(sys.hamiltonian(x, t) - h0));
  }
  return drift / scale;
}

}  // namespace

TEST_CASE("harmonic oscillator conserves its quadratic energy") {
  const LinearHamiltonianSystem sys = oscillator(Vector::Unit(2, 0));
  const Trajectory tr = implicit_midpoint_linear(sys, {0.0, 50.0, 501});
  CHECK((tr.states.col(0) - sys.x0()).norm() == 0.0);
  const double h0 = sys.hamiltonian(tr.states.col(0), 0.0);
  for (Index i = 0; i < tr.states.cols(); ++i)
    CHECK(std::abs(sys.hamiltonian(tr.states.col(i), 0.0) - h0) <= 1e-12 * h0);
}

TEST_CASE("zero dynamics keep the initial state") {
  const Vector x0 = gaussian(6, 1, 1);
  const LinearDynamics dyn{Matrix::Zero(6, 6), Vector::Zero(6), ForcingProfile()};
  const Trajectory tr = implicit_midpoint_linear(dyn, x0, {0.0, 1.0, 11});
  for (Index i = 0; i < 11; ++i) CHECK((tr.states.col(i) - x0).norm() == 0.0);
}

TEST_CASE("implicit midpoint is second order") {
  const double e1 = max_oscillator_error(101);
  const double e2 = max_oscillator_error(201);
  const double e3 = max_oscillator_error(401);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  CHECK(e2 / e3 >= 3.5);
  CHECK(e2 / e3 <= 4.5);
}

TEST_CASE("midpoint propagator is symplectic") {
  for (auto [nx, ny] : {std::pair{2, 1}, std::pair{5, 3}, std::pair{8, 2}}) {
    const LatticeSpec spec = lattice(nx, ny);
    const LinearHamiltonianSystem sys =
        build_cantilever_lattice(spec, {60e9, 50e9}, forcing_profile(ForcingKind::constant_tip, 1.0, 0.0));
    REQUIRE(sys.full_dim() <= 200);
    const LinearDynamics dyn = full_dynamics(sys);
    const ImplicitMidpoint im(dyn.a, 0.05);
    CHECK(symplecticity_measure(im.propagator()) < 1e-8);
  }
}

TEST_CASE("forced step matches the closed formula") {
  const LatticeSpec spec = lattice(3, 1);
  const LinearHamiltonianSystem sys =
      build_cantilever_lattice(spec, {60e9, 50e9}, forcing_profile(ForcingKind::sinusoidal_tip, 1.0, 0.7));
  const LinearDynamics dyn = full_dynamics(sys);
  const Index d = sys.full_dim();
  CHECK((dyn.a - dense_j(d / 2) * sys.hamiltonian_matrix()).norm() == 0.0);
  const TimeGrid grid{0.0, 1.0, 5};
  const Trajectory tr = implicit_midpoint_linear(sys, grid);
  const double dt = grid.dt();
  const Matrix lhs = Matrix::Identity(d, d) - 0.5 * dt * dyn.a;
  const Matrix rhs = Matrix::Identity(d, d) + 0.5 * dt * dyn.a;
  for (Index i = 0; i + 1 < grid.nt; ++i) {
    const double tm = grid.time(i) + 0.5 * dt;
    const Vector b = dense_j(d / 2) * sys.linear_term(tm);
    const Vector expect = lhs.partialPivLu().solve(rhs * tr.states.col(i) + dt * b);
    CHECK((tr.states.col(i + 1) - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
  }
}

TEST_CASE("superposition of unforced trajectories") {
  const LatticeSpec spec = lattice(4, 2);
  const ForcingProfile none = forcing_profile(ForcingKind::constant_tip, 0.0, 0.0);
  const LinearHamiltonianSystem base = build_cantilever_lattice(spec, {60e9, 50e9}, none);
  const Index d = base.full_dim();
  const Vector xa = gaussian(d, 1, 1), xb = gaussian(d, 1, 2);
  const LinearDynamics dyn = full_dynamics(base);
  const TimeGrid grid{0.0, 2.0, 41};
  const Matrix ta = implicit_midpoint_linear(dyn, xa, grid).states;
  const Matrix tb = implicit_midpoint_linear(dyn, xb, grid).states;
  const Matrix tab = implicit_midpoint_linear(dyn, xa + xb, grid).states;
  CHECK((tab - ta - tb).norm() <= 1e-10 * tab.norm());
}

TEST_CASE("singular midpoint matrix is reported") {
  const double dt = 0.5;
  const Matrix a = (2.0 / dt) * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(ImplicitMidpoint(a, dt), IntegrationError);
  try {
    ImplicitMidpoint im(a, dt);
  } catch (const IntegrationError& e) {
    CHECK(e.dt() == dt);
    CHECK(e.rcond() <= 1e-15);
  }
}

TEST_CASE("autonomous full model preserves its Hamiltonian") {
  const LatticeSpec spec = lattice(10, 3);
  const LinearHamiltonianSystem sys =
      build_cantilever_lattice(spec, {80e9, 60e9}, forcing_profile(ForcingKind::constant_tip, 1.0, 0.0));
  const Trajectory tr = implicit_midpoint_linear(sys, {0.0, 200.0, 151});
  CHECK(relative_drift(sys, tr) < 1e-10);
}

TEST_CASE("extended Hamiltonian of a forced system") {
  const LatticeSpec spec = lattice(4, 2);
  auto drift = [&](Index nt) {
    const LinearHamiltonianSystem sys =
        build_cantilever_lattice(spec, {80e9, 60e9}, forcing_profile(ForcingKind::sinusoidal_tip, 1.0, 0.02));
    const TimeGrid grid{0.0, 50.0, nt};
    const Trajectory tr = implicit_midpoint_linear(sys, grid);
    const ExtendedHamiltonian ext = extended_hamiltonian_profile(sys, tr.states, grid);
    CHECK(ext.value(0) == doctest::Approx(0.0));
    return ext.value.cwiseAbs().maxCoeff() / ext.momentum.cwiseAbs().maxCoeff();
  };
  const double coarse = drift(201), fine = drift(401);
  CHECK(coarse < 1e-2);
  CHECK(fine < coarse);

  const LinearHamiltonianSystem aut =
      build_cantilever_lattice(spec, {80e9, 60e9}, forcing_profile(ForcingKind::constant_tip, 1.0, 0.0));
  const TimeGrid grid{0.0, 5.0, 21};
  const Trajectory tr = implicit_midpoint_linear(aut, grid);
  const ExtendedHamiltonian ext = extended_hamiltonian_profile(aut, tr.states, grid);
  for (Index i = 0; i < 21; ++i) CHECK(ext.momentum(i) == ext.momentum(0));
}

TEST_CASE("snapshot collection") {
  const LatticeSpec spec = lattice(3, 1);
  const ForcingProfile f = forcing_profile(ForcingKind::sinusoidal_tip, 1.0, 0.1);
  const SystemBuilder build = [&](const LameParameters& mu) { return build_cantilever_lattice(spec, mu, f); };
  DesignSpec ds;
  ds.grid = {0.0, 10.0, 151};
  ds.num_test = 0;
  const ExperimentDesign design = make_design(ds, spec.domain, 24);
  const SnapshotMatrix s = snapshot_collect(design, build, 2);
  CHECK(s.data.cols() == 1359);
  CHECK(s.nt == 151);
  CHECK(s.params.size() == 9);

  // Column (mu_j, t_i) against an independent integration.
  const Index col = 4 * 151 + 77;
  const LameParameters& mu = s.parameter_of(col);
  CHECK(mu.lambda == design.training[4].lambda);
  CHECK(s.time_index_of(col) == 77);
  const Trajectory tr = implicit_midpoint_linear(build(mu), design.grid);
  CHECK((s.data.col(col) - tr.states.col(77)).norm() == 0.0);

  // Parallel and serial collection agree bitwise.
  CHECK((snapshot_collect(design, build, 1).data - s.data).norm() == 0.0);

  ExperimentDesign one;
  one.training = {design.training[0]};
  one.grid = {0.0, 1.0, 2};
  const SnapshotMatrix s2 = snapshot_collect(one, build);
  CHECK(s2.data.cols() == 2);
  CHECK((s2.data.col(0) - build(one.training[0]).x0()).norm() == 0.0);
}
