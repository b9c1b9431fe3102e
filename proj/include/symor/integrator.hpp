#pragma once

#include <functional>
#include <vector>

#include "symor/models.hpp"

namespace symor {

// dx/dt = A x + phi(t) b
struct LinearDynamics {
  Matrix a;
  Vector b;
  ForcingProfile profile;
};

LinearDynamics full_dynamics(const LinearHamiltonianSystem& sys);

struct Trajectory {
  Matrix states;  // one column per time step
  TimeGrid grid;
  LameParameters tag;
};

class ImplicitMidpoint {
 public:
  ImplicitMidpoint(const Matrix& a, double dt);

  // (I - dt/2 A)^{-1} [(I + dt/2 A) x + dt * b_mid]
  Vector step(const Vector& x, const Vector& b_mid) const;
  Matrix propagator() const;
  double rcond() const { return rcond_; }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  Matrix plus_;
  double dt_;
  double rcond_;
};

Trajectory implicit_midpoint_linear(const LinearDynamics& dyn, const Vector& x0, const TimeGrid& grid,
                                    const LameParameters& tag = {});
Trajectory implicit_midpoint_linear(const LinearHamiltonianSystem& sys, const TimeGrid& grid);

struct SnapshotMatrix {
  Matrix data;
  std::vector<LameParameters> params;
  Index nt = 0;

  const LameParameters& parameter_of(Index col) const { return params[static_cast<std::size_t>(col / nt)]; }
  Index time_index_of(Index col) const { return col % nt; }
};

using SystemBuilder = std::function<LinearHamiltonianSystem(const LameParameters&)>;

// Training trajectories stacked columnwise in training order.
SnapshotMatrix snapshot_collect(const ExperimentDesign& design, const SystemBuilder& build, int jobs = 1);

}  // namespace symor
