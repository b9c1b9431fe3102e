#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "symor/symplectic.hpp"

namespace symor {

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

struct ParameterDomain {
  double lambda_min = 35e9;
  double lambda_max = 125e9;
  double mu_min = 35e9;
  double mu_max = 83e9;

  bool contains(const LameParameters& p) const {
    return p.lambda >= lambda_min && p.lambda <= lambda_max && p.mu >= mu_min && p.mu <= mu_max;
  }
};

// Reference constants used to make the lattice dimensionless.
struct MaterialConstants {
  double density = 7856.0;
  double lambda_ref = 81e9;
  double mu_ref = 81e9;
  double length_ref = 1.0;
  double gravity_ref = 9.81;

  // Seconds per unit of dimensionless time: length_ref * sqrt(density / lambda_ref).
  double time_scale() const;
};

enum class ForcingKind { constant_tip, sinusoidal_tip };

ForcingKind forcing_kind_from_string(std::string_view name);
std::string_view to_string(ForcingKind kind);

// Scalar time profile multiplying the tip-load pattern.
class ForcingProfile {
 public:
  ForcingProfile() = default;
  ForcingProfile(ForcingKind kind, double amplitude, double frequency);

  double operator()(double t) const;
  double derivative(double t) const;
  bool autonomous() const { return kind_ == ForcingKind::constant_tip; }
  ForcingKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return frequency_; }

 private:
  ForcingKind kind_ = ForcingKind::constant_tip;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
};

ForcingProfile forcing_profile(ForcingKind kind, double amplitude, double frequency);

// dx/dt = J (H x + h(t)), H = [[K, 0], [0, Minv]], h(t) = (-phi(t) f, 0),
// K = sum_i theta_i K_i.
class LinearHamiltonianSystem {
 public:
  LinearHamiltonianSystem(std::vector<Matrix> stiffness_terms, std::vector<double> theta,
                          Vector mass_inverse, Vector load_pattern, ForcingProfile forcing, Vector x0,
                          LameParameters tag = {});

  Index half_dim() const { return mass_inverse_.size(); }
  Index full_dim() const { return 2 * half_dim(); }

  Matrix stiffness() const;
  const std::vector<Matrix>& stiffness_terms() const { return terms_; }
  const std::vector<double>& theta() const { return theta_; }
  const Vector& mass_inverse() const { return mass_inverse_; }
  const Vector& load_pattern() const { return load_; }
  const ForcingProfile& forcing() const { return forcing_; }
  const Vector& x0() const { return x0_; }
  const LameParameters& parameters() const { return tag_; }
  bool autonomous() const { return forcing_.autonomous(); }

  Matrix hamiltonian_matrix() const;
  // (-f, 0) with the forcing profile factored out.
  Vector linear_pattern() const;
  Vector linear_term(double t) const;

  double hamiltonian(const Vector& x, double t) const;
  // Partial time derivative of H at fixed x.
  double hamiltonian_rate(const Vector& x, double t) const;

 private:
  std::vector<Matrix> terms_;
  std::vector<double> theta_;
  Vector mass_inverse_;
  Vector load_;
  ForcingProfile forcing_;
  Vector x0_;
  LameParameters tag_;
};

struct LatticeSpec {
  int nx = 30;
  int ny = 4;
  double length = 9.4;  // in units of length_ref
  MaterialConstants constants;
  ParameterDomain domain;
};

// Cantilever spring lattice, left edge clamped. Axial springs scale with
// (lambda + mu), diagonal springs with mu. DOFs: all x displacements, then all y.
LinearHamiltonianSystem build_cantilever_lattice(const LatticeSpec& spec, const LameParameters& mu,
                                                 const ForcingProfile& forcing);

struct TimeGrid {
  double t0 = 0.0;
  double t_end = 1.0;
  Index nt = 2;

  double dt() const { return (t_end - t0) / static_cast<double>(nt - 1); }
  double time(Index i) const { return t0 + static_cast<double>(i) * dt(); }
};

struct ExperimentDesign {
  std::vector<LameParameters> training;
  std::vector<LameParameters> test;
  TimeGrid grid;
  std::vector<Index> sweep;
};

struct DesignSpec {
  int training_per_axis = 3;
  int num_test = 16;
  std::uint64_t seed = 20190301;
  TimeGrid grid;
  std::vector<Index> sweep;
};

ExperimentDesign make_design(const DesignSpec& spec, const ParameterDomain& domain, Index full_dim);

// Extended phase space bookkeeping for non-autonomous forcing: p_hat starts at
// -H(t0, x0) and follows dp_hat/dt = -dH/dt, integrated by the midpoint rule
// along the sampled trajectory.
struct ExtendedHamiltonian {
  Vector momentum;
  Vector value;
};

double extended_hamiltonian(const LinearHamiltonianSystem& sys, const Vector& x, double t, double p_hat);
ExtendedHamiltonian extended_hamiltonian_profile(const LinearHamiltonianSystem& sys, const Matrix& states,
                                                 const TimeGrid& grid);

}  // namespace symor
