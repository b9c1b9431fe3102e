#include "symor/integrator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "symor/parallel.hpp"

namespace symor {

LinearDynamics full_dynamics(const LinearHamiltonianSystem& sys) {
  return {apply_poisson(sys.hamiltonian_matrix()), apply_poisson(sys.linear_pattern()), sys.forcing()};
}

ImplicitMidpoint::ImplicitMidpoint(const Matrix& a, double dt) : dt_(dt) {
  if (a.rows() != a.cols()) throw DimensionError("implicit midpoint: operator must be square");
  const Index d = a.rows();
  Matrix minus = -0.5 * dt * a;
  minus.diagonal().array() += 1.0;
  plus_ = 0.5 * dt * a;
  plus_.diagonal().array() += 1.0;
  if (d == 0) {
    rcond_ = 1.0;
    return;
  }
  lu_.compute(minus);
  rcond_ = lu_.rcond();
  if (!(rcond_ > std::numeric_limits<double>::epsilon()) || !std::isfinite(rcond_))
    throw IntegrationError("implicit midpoint matrix is singular for dt = " + std::to_string(dt) +
                               " (reciprocal condition " + std::to_string(rcond_) + ")",
                           dt, rcond_);
}

Vector ImplicitMidpoint::step(const Vector& x, const Vector& b_mid) const {
  if (x.size() == 0) return x;
  return lu_.solve(plus_ * x + dt_ * b_mid);
}

Matrix ImplicitMidpoint::propagator() const {
  if (plus_.size() == 0) return plus_;
  return lu_.solve(plus_);
}

Trajectory implicit_midpoint_linear(const LinearDynamics& dyn, const Vector& x0, const TimeGrid& grid,
                                    const LameParameters& tag) {
  if (grid.nt < 2) throw DimensionError("time grid needs at least two points");
  if (x0.size() != dyn.a.rows() || dyn.b.size() != dyn.a.rows())
    throw DimensionError("implicit midpoint: state, operator and forcing sizes differ");
  const double dt = grid.dt();
  ImplicitMidpoint im(dyn.a, dt);
  Trajectory tr;
  tr.grid = grid;
  tr.tag = tag;
  tr.states.resize(x0.size(), grid.nt);
  tr.states.col(0) = x0;
  Vector x = x0;
  for (Index i = 0; i + 1 < grid.nt; ++i) {
    const double tm = grid.time(i) + 0.5 * dt;
    x = im.step(x, dyn.profile(tm) * dyn.b);
    tr.states.col(i + 1) = x;
  }
  return tr;
}

Trajectory implicit_midpoint_linear(const LinearHamiltonianSystem& sys, const TimeGrid& grid) {
  return implicit_midpoint_linear(full_dynamics(sys), sys.x0(), grid, sys.parameters());
}

SnapshotMatrix snapshot_collect(const ExperimentDesign& design, const SystemBuilder& build, int jobs) {
  const auto& params = design.training;
  if (params.empty()) throw ConfigError("snapshot collection needs at least one training parameter");
  const Index nt = design.grid.nt;
  std::vector<Matrix> blocks(params.size());
  parallel_for(params.size(), jobs, [&](std::size_t i) {
    try {
      blocks[i] = implicit_midpoint_linear(build(params[i]), design.grid).states;
    } catch (const IntegrationError& e) {
      throw IntegrationError("training parameter (" + std::to_string(params[i].lambda) + ", " +
                                 std::to_string(params[i].mu) + "): " + e.what(),
                             e.dt(), e.rcond());
    }
  });
  SnapshotMatrix out;
  out.nt = nt;
  out.params = params;
  out.data.resize(blocks.front().rows(), static_cast<Index>(params.size()) * nt);
  for (std::size_t i = 0; i < blocks.size(); ++i) out.data.middleCols(static_cast<Index>(i) * nt, nt) = blocks[i];
  return out;
}

}  // namespace symor
