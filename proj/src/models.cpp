#include "symor/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace symor {

double MaterialConstants::time_scale() const { return length_ref * std::sqrt(density / lambda_ref); }

ForcingKind forcing_kind_from_string(std::string_view name) {
  if (name == "constant_tip") return ForcingKind::constant_tip;
  if (name == "sinusoidal_tip") return ForcingKind::sinusoidal_tip;
  throw ConfigError("unknown forcing kind '" + std::string(name) + "'");
}

std::string_view to_string(ForcingKind kind) {
  return kind == ForcingKind::constant_tip ? "constant_tip" : "sinusoidal_tip";
}

ForcingProfile::ForcingProfile(ForcingKind kind, double amplitude, double frequency)
    : kind_(kind), amplitude_(amplitude), frequency_(frequency) {
  if (!std::isfinite(amplitude)) throw ConfigError("forcing amplitude must be finite");
  if (kind == ForcingKind::sinusoidal_tip && !(frequency > 0.0 && std::isfinite(frequency)))
    throw ConfigError("sinusoidal forcing needs a positive frequency");
}

double ForcingProfile::operator()(double t) const {
  if (kind_ == ForcingKind::constant_tip) return amplitude_;
  return amplitude_ * std::sin(2.0 * std::numbers::pi * frequency_ * t);
}

double ForcingProfile::derivative(double t) const {
  if (kind_ == ForcingKind::constant_tip) return 0.0;
  const double w = 2.0 * std::numbers::pi * frequency_;
  return amplitude_ * w * std::cos(w * t);
}

ForcingProfile forcing_profile(ForcingKind kind, double amplitude, double frequency) {
  return ForcingProfile(kind, amplitude, frequency);
}

LinearHamiltonianSystem::LinearHamiltonianSystem(std::vector<Matrix> stiffness_terms, std::vector<double> theta,
                                                 Vector mass_inverse, Vector load_pattern, ForcingProfile forcing,
                                                 Vector x0, LameParameters tag)
    : terms_(std::move(stiffness_terms)),
      theta_(std::move(theta)),
      mass_inverse_(std::move(mass_inverse)),
      load_(std::move(load_pattern)),
      forcing_(forcing),
      x0_(std::move(x0)),
      tag_(tag) {
  const Index n = mass_inverse_.size();
  if (terms_.size() != theta_.size()) throw DimensionError("stiffness terms and coefficients differ in count");
  for (const auto& k : terms_)
    if (k.rows() != n || k.cols() != n) throw DimensionError("stiffness term has wrong shape");
  if (load_.size() != n) throw DimensionError("load pattern has wrong length");
  if (x0_.size() != 2 * n) throw DimensionError("initial state has wrong length");
  if ((mass_inverse_.array() <= 0.0).any()) throw ParameterError("inverse mass must be positive");
}

Matrix LinearHamiltonianSystem::stiffness() const {
  const Index n = half_dim();
  Matrix k = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < terms_.size(); ++i) k += theta_[i] * terms_[i];
  return k;
}

Matrix LinearHamiltonianSystem::hamiltonian_matrix() const {
  const Index n = half_dim();
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = stiffness();
  h.bottomRightCorner(n, n).diagonal() = mass_inverse_;
  return h;
}

Vector LinearHamiltonianSystem::linear_pattern() const {
  Vector h = Vector::Zero(full_dim());
  h.head(half_dim()) = -load_;
  return h;
}

Vector LinearHamiltonianSystem::linear_term(double t) const { return forcing_(t) * linear_pattern(); }

double LinearHamiltonianSystem::hamiltonian(const Vector& x, double t) const {
  const Index n = half_dim();
  if (x.size() != 2 * n) throw DimensionError("hamiltonian: state has wrong length");
  const auto q = x.head(n);
  const auto p = x.tail(n);
  double kq = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) kq += theta_[i] * q.dot(terms_[i] * q);
  const double kin = p.dot(mass_inverse_.cwiseProduct(p));
  return 0.5 * (kq + kin) - forcing_(t) * q.dot(load_);
}

double LinearHamiltonianSystem::hamiltonian_rate(const Vector& x, double t) const {
  if (x.size() != full_dim()) throw DimensionError("hamiltonian_rate: state has wrong length");
  return -forcing_.derivative(t) * x.head(half_dim()).dot(load_);
}

LinearHamiltonianSystem build_cantilever_lattice(const LatticeSpec& spec, const LameParameters& mu,
                                                 const ForcingProfile& forcing) {
  if (spec.nx < 2 || spec.ny < 1) throw ConfigError("lattice needs nx >= 2 and ny >= 1");
  if (!(spec.length > 0.0)) throw ConfigError("lattice length must be positive");
  if (!spec.domain.contains(mu))
    throw ParameterError("Lame parameters (" + std::to_string(mu.lambda) + ", " + std::to_string(mu.mu) +
                         ") outside the parameter domain");
  const int nx = spec.nx;
  const int ny = spec.ny;
  const double a = spec.length / nx;

  // Free nodes are i = 1..nx; the i = 0 column is clamped.
  auto node = [&](int i, int j) -> Index { return (i == 0) ? -1 : static_cast<Index>((i - 1) * (ny + 1) + j); };
  const Index nodes = static_cast<Index>(nx) * (ny + 1);
  const Index n = 2 * nodes;

  Matrix k_axial = Matrix::Zero(n, n);
  Matrix k_diag = Matrix::Zero(n, n);
  auto spring = [&](Matrix& k, int i0, int j0, int i1, int j1) {
    double dx = i1 - i0, dy = j1 - j0;
    const double len = std::hypot(dx, dy);
    dx /= len;
    dy /= len;
    const double d[2] = {dx, dy};
    const Index ends[2] = {node(i0, j0), node(i1, j1)};
    const double sign[2] = {1.0, -1.0};
    for (int u = 0; u < 2; ++u) {
      if (ends[u] < 0) continue;
      for (int v = 0; v < 2; ++v) {
        if (ends[v] < 0) continue;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            k(r * nodes + ends[u], c * nodes + ends[v]) += sign[u] * sign[v] * d[r] * d[c];
      }
    }
  };
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      if (i < nx) spring(k_axial, i, j, i + 1, j);
      if (j < ny) spring(k_axial, i, j, i, j + 1);
      if (i < nx && j < ny) {
        spring(k_diag, i, j, i + 1, j + 1);
        spring(k_diag, i + 1, j, i, j + 1);
      }
    }
  }

  Vector mass = Vector::Zero(n);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (auto [di, dj] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
        const Index id = node(i + di, j + dj);
        if (id < 0) continue;
        mass(id) += a * a / 4.0;
        mass(nodes + id) += a * a / 4.0;
      }

  Vector load = Vector::Zero(n);
  for (int j = 0; j <= ny; ++j) load(nodes + node(nx, j)) = 1.0 / (ny + 1);
  // Downward load; the sign sits in the pattern so the profile stays positive.
  load = -load;

  const auto& c = spec.constants;
  std::vector<double> theta = {(mu.lambda + mu.mu) / c.lambda_ref, mu.mu / c.mu_ref};
  return LinearHamiltonianSystem({std::move(k_axial), std::move(k_diag)}, std::move(theta), mass.cwiseInverse(),
                                 std::move(load), forcing, Vector::Zero(2 * n), mu);
}

ExperimentDesign make_design(const DesignSpec& spec, const ParameterDomain& domain, Index full_dim) {
  if (spec.training_per_axis < 1) throw ConfigError("training grid needs at least one point per axis");
  if (spec.num_test < 0) throw ConfigError("number of test parameters must be non-negative");
  if (spec.grid.nt < 2) throw ConfigError("time grid needs nt >= 2");
  if (!(spec.grid.t_end > spec.grid.t0)) throw ConfigError("time grid needs t_end > t0");
  for (Index s : spec.sweep) {
    if (s <= 0 || s % 2 != 0 || s > full_dim)
      throw ConfigError("sweep size " + std::to_string(s) + " must be even and within (0, " +
                        std::to_string(full_dim) + "]");
  }
  ExperimentDesign d;
  d.grid = spec.grid;
  d.sweep = spec.sweep;
  const int g = spec.training_per_axis;
  auto lin = [g](double lo, double hi, int i) { return g == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (g - 1); };
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      d.training.push_back({lin(domain.lambda_min, domain.lambda_max, i), lin(domain.mu_min, domain.mu_max, j)});

  // Raw 64-bit draws keep the sequence identical across standard libraries.
  std::mt19937_64 rng(spec.seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto same = [](const LameParameters& x, const LameParameters& y) { return x.lambda == y.lambda && x.mu == y.mu; };
  while (static_cast<int>(d.test.size()) < spec.num_test) {
    LameParameters p{domain.lambda_min + (domain.lambda_max - domain.lambda_min) * unit(),
                     domain.mu_min + (domain.mu_max - domain.mu_min) * unit()};
    const bool dup = std::any_of(d.training.begin(), d.training.end(), [&](auto& t) { return same(t, p); }) ||
                     std::any_of(d.test.begin(), d.test.end(), [&](auto& t) { return same(t, p); });
    if (!dup) d.test.push_back(p);
  }
  return d;
}

double extended_hamiltonian(const LinearHamiltonianSystem& sys, const Vector& x, double t, double p_hat) {
  return sys.hamiltonian(x, t) + p_hat;
}

ExtendedHamiltonian extended_hamiltonian_profile(const LinearHamiltonianSystem& sys, const Matrix& states,
                                                 const TimeGrid& grid) {
  const Index nt = states.cols();
  ExtendedHamiltonian out;
  out.momentum.resize(nt);
  out.value.resize(nt);
  if (nt == 0) return out;
  const double dt = grid.dt();
  out.momentum(0) = -sys.hamiltonian(states.col(0), grid.time(0));
  for (Index i = 1; i < nt; ++i) {
    const Vector mid = 0.5 * (states.col(i - 1) + states.col(i));
    out.momentum(i) = out.momentum(i - 1) - dt * sys.hamiltonian_rate(mid, grid.time(i - 1) + 0.5 * dt);
  }
  for (Index i = 0; i < nt; ++i)
    out.value(i) = extended_hamiltonian(sys, states.col(i), grid.time(i), out.momentum(i));
  return out;
}

}  // namespace symor
