#include "symor/rom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symor {

namespace {

void check_mode(const ReducedBasis& v, ProjectionMode mode) {
  if (mode == ProjectionMode::symplectic && !v.symplectic())
    throw ModeError("symplectic projection requested for a basis of kind " + std::string(to_string(v.kind())));
  if (mode == ProjectionMode::galerkin && !v.orthonormal())
    throw ModeError("Galerkin projection requested for a basis of kind " + std::string(to_string(v.kind())));
}

Matrix left_factor(const ReducedBasis& v, ProjectionMode mode) {
  return mode == ProjectionMode::symplectic ? symplectic_inverse(v.matrix()) : Matrix(v.matrix().transpose());
}

}  // namespace

std::string_view to_string(ProjectionMode mode) {
  return mode == ProjectionMode::symplectic ? "symplectic" : "galerkin";
}

ProjectionMode default_mode(const ReducedBasis& v) {
  return v.symplectic() ? ProjectionMode::symplectic : ProjectionMode::galerkin;
}

double ReducedLinearSystem::hamiltonian(const Vector& xr, double t) const {
  return 0.5 * xr.dot(h * xr) + profile(t) * xr.dot(h_lin);
}

ReducedLinearSystem reduce_system(const LinearHamiltonianSystem& sys, const ReducedBasis& v, ProjectionMode mode) {
  if (v.full_dim() != sys.full_dim()) throw DimensionError("reduce_system: basis and system dimensions differ");
  check_mode(v, mode);
  const Matrix& vm = v.matrix();
  const Matrix wt = left_factor(v, mode);
  const Matrix hfull = sys.hamiltonian_matrix();
  const Vector hpat = sys.linear_pattern();
  ReducedLinearSystem red;
  red.mode = mode;
  red.tag = sys.parameters();
  red.profile = sys.forcing();
  red.h = vm.transpose() * hfull * vm;
  red.h = (0.5 * (red.h + red.h.transpose())).eval();
  red.h_lin = vm.transpose() * hpat;
  if (mode == ProjectionMode::symplectic) {
    red.a = apply_poisson(red.h);
    red.b = apply_poisson(red.h_lin);
  } else {
    red.a = wt * apply_poisson(Matrix(hfull * vm));
    red.b = wt * apply_poisson(hpat);
  }
  red.x0 = wt * sys.x0();
  return red;
}

ReducedLinearSystem reduce_system(const LinearHamiltonianSystem& sys, const ReducedBasis& v) {
  return reduce_system(sys, v, default_mode(v));
}

ReducedModelFactory::ReducedModelFactory(const LinearHamiltonianSystem& prototype, const ReducedBasis& v,
                                         ProjectionMode mode)
    : mode_(mode), v_(v.matrix()) {
  if (v.full_dim() != prototype.full_dim())
    throw DimensionError("reduced model factory: basis and system dimensions differ");
  check_mode(v, mode);
  w_t_ = left_factor(v, mode);
  const Index n = prototype.half_dim();
  const auto vq = v_.topRows(n);
  const auto vp = v_.bottomRows(n);
  auto project = [&](const Matrix& hv, Matrix& h_out, Matrix& a_out) {
    h_out = v_.transpose() * hv;
    h_out = (0.5 * (h_out + h_out.transpose())).eval();
    a_out = mode_ == ProjectionMode::symplectic ? Matrix(apply_poisson(h_out)) : Matrix(w_t_ * apply_poisson(hv));
  };
  for (const auto& k : prototype.stiffness_terms()) {
    Matrix hv = Matrix::Zero(2 * n, v_.cols());
    hv.topRows(n) = k * vq;
    h_terms_.emplace_back();
    a_terms_.emplace_back();
    project(hv, h_terms_.back(), a_terms_.back());
  }
  Matrix hv = Matrix::Zero(2 * n, v_.cols());
  hv.bottomRows(n) = prototype.mass_inverse().asDiagonal() * vp;
  project(hv, h_mass_, a_mass_);
  const Vector hpat = prototype.linear_pattern();
  h_lin_ = v_.transpose() * hpat;
  b_ = mode_ == ProjectionMode::symplectic ? Vector(apply_poisson(h_lin_)) : Vector(w_t_ * apply_poisson(hpat));
}

ReducedLinearSystem ReducedModelFactory::assemble(const LinearHamiltonianSystem& sys) const {
  if (sys.theta().size() != h_terms_.size())
    throw DimensionError("reduced model factory: parameter-separable structure differs");
  ReducedLinearSystem red;
  red.mode = mode_;
  red.tag = sys.parameters();
  red.profile = sys.forcing();
  red.h = h_mass_;
  red.a = a_mass_;
  for (std::size_t i = 0; i < h_terms_.size(); ++i) {
    red.h += sys.theta()[i] * h_terms_[i];
    red.a += sys.theta()[i] * a_terms_[i];
  }
  red.h_lin = h_lin_;
  red.b = b_;
  red.x0 = w_t_ * sys.x0();
  return red;
}

ReducedSolution solve_reduced(const ReducedLinearSystem& red, const TimeGrid& grid) {
  ReducedSolution out;
  out.trajectory = implicit_midpoint_linear(red.dynamics(), red.x0, grid, red.tag);
  out.hamiltonian.resize(grid.nt);
  for (Index i = 0; i < grid.nt; ++i)
    out.hamiltonian(i) = red.hamiltonian(out.trajectory.states.col(i), grid.time(i));
  return out;
}

double relative_error(const Matrix& full, const Matrix& reduced, const ReducedBasis& v) {
  if (full.cols() != reduced.cols()) throw DimensionError("relative_error: trajectories differ in length");
  if (reduced.rows() != v.size() || full.rows() != v.full_dim())
    throw DimensionError("relative_error: basis does not match trajectories");
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < full.cols(); ++i) {
    const Vector rec = v.matrix() * reduced.col(i);
    num = std::max(num, (full.col(i) - rec).lpNorm<Eigen::Infinity>());
    den = std::max(den, full.col(i).lpNorm<Eigen::Infinity>());
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double hamiltonian_scale(const LinearHamiltonianSystem& sys, const Trajectory& full) {
  const Matrix h = sys.hamiltonian_matrix();
  double scale = 0.0;
  for (Index i = 0; i < full.states.cols(); ++i) {
    const Vector x = full.states.col(i);
    const double quad = 0.5 * std::abs(x.dot(h * x));
    const double lin = std::abs(x.dot(sys.linear_term(full.grid.time(i))));
    scale = std::max(scale, quad + lin);
  }
  return std::max(scale, std::numeric_limits<double>::epsilon());
}

DriftResult hamiltonian_drift(const Vector& values, double scale, double tol) {
  DriftResult out;
  out.profile = Vector::Zero(values.size());
  if (values.size() == 0) {
    out.preserved = true;
    return out;
  }
  for (Index i = 0; i < values.size(); ++i) out.profile(i) = std::abs(values(i) - values(0)) / scale;
  out.max_drift = out.profile.maxCoeff();
  out.preserved = std::isfinite(out.max_drift) && out.max_drift < tol;
  return out;
}

}  // namespace symor
