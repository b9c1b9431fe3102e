#pragma once

#include <string_view>

#include "symor/integrator.hpp"

namespace symor {

enum class ProjectionMode { symplectic, galerkin };

std::string_view to_string(ProjectionMode mode);
// Structure-preserving projection for symplectic kinds, Galerkin otherwise.
ProjectionMode default_mode(const ReducedBasis& v);

struct ReducedLinearSystem {
  Matrix h;        // V^T H V
  Vector h_lin;    // V^T (h pattern); the forcing profile multiplies it
  Matrix a;        // W^T A V
  Vector b;        // W^T J (h pattern)
  Vector x0;       // W^T x0
  ForcingProfile profile;
  ProjectionMode mode = ProjectionMode::symplectic;
  LameParameters tag;

  LinearDynamics dynamics() const { return {a, b, profile}; }
  double hamiltonian(const Vector& xr, double t) const;
};

ReducedLinearSystem reduce_system(const LinearHamiltonianSystem& sys, const ReducedBasis& v, ProjectionMode mode);
ReducedLinearSystem reduce_system(const LinearHamiltonianSystem& sys, const ReducedBasis& v);

// Offline/online split over the affine stiffness terms: every term is
// projected once, each parameter only recombines small matrices.
class ReducedModelFactory {
 public:
  ReducedModelFactory(const LinearHamiltonianSystem& prototype, const ReducedBasis& v, ProjectionMode mode);

  // `sys` must share the stiffness terms, mass and load of the prototype.
  ReducedLinearSystem assemble(const LinearHamiltonianSystem& sys) const;
  ProjectionMode mode() const { return mode_; }

 private:
  ProjectionMode mode_;
  Matrix v_;
  Matrix w_t_;
  std::vector<Matrix> h_terms_;  // V^T [[K_i, 0], [0, 0]] V
  std::vector<Matrix> a_terms_;  // W^T J [[K_i, 0], [0, 0]] V
  Matrix h_mass_;
  Matrix a_mass_;
  Vector h_lin_;
  Vector b_;
};

struct ReducedSolution {
  Trajectory trajectory;
  Vector hamiltonian;  // reduced Hamiltonian per step
};

ReducedSolution solve_reduced(const ReducedLinearSystem& red, const TimeGrid& grid);

// max_i ||x_i - V xr_i||_inf / max_i ||x_i||_inf
double relative_error(const Matrix& full, const Matrix& reduced, const ReducedBasis& v);

// max_i (|x_i^T H x_i| / 2 + |x_i^T h(t_i)|) over a full trajectory, floored at
// machine epsilon. Serves as the scale for Hamiltonian drift.
double hamiltonian_scale(const LinearHamiltonianSystem& sys, const Trajectory& full);

inline constexpr double kPreservationTolerance = 1e-10;

struct DriftResult {
  bool preserved = false;
  double max_drift = 0.0;
  Vector profile;  // |H_i - H_0| / scale
};

DriftResult hamiltonian_drift(const Vector& values, double scale, double tol = kPreservationTolerance);

}  // namespace symor
