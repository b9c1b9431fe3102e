#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "symor/basis.hpp"
#include "symor/models.hpp"

namespace symor {

// Times and frequencies are physical (seconds, hertz); they are scaled by
// MaterialConstants::time_scale() when the experiment is built.
struct RunConfig {
  LatticeSpec lattice;
  ForcingKind forcing_kind = ForcingKind::sinusoidal_tip;
  double forcing_amplitude = 1.0;
  std::optional<double> forcing_frequency;  // defaults to 1 / (t_end - t0)

  int training_per_axis = 3;
  int num_test = 16;
  std::uint64_t seed = 20190301;
  double t0 = 0.0;
  double t_end = 7.2e-2;
  Index nt = 151;
  std::vector<Index> sweep = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};

  std::vector<BasisMethod> methods = all_basis_methods();
  std::filesystem::path output = "out";
  int jobs = 1;

  BasisOptions basis;
  double preservation_tolerance = 1e-10;

  double frequency() const;
  ForcingProfile forcing() const;          // dimensionless time
  TimeGrid grid() const;                   // dimensionless time
  DesignSpec design_spec() const;
  ExperimentDesign design() const;
  LinearHamiltonianSystem build(const LameParameters& mu) const;
  Index full_dim() const { return 4 * static_cast<Index>(lattice.nx) * (lattice.ny + 1); }
};

// Strict parse: unknown keys, wrong types and invalid values raise ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// Every field, defaults included, as pretty-printed JSON.
std::string resolved_config_json(const RunConfig& cfg);

void validate(const RunConfig& cfg);

}  // namespace symor
