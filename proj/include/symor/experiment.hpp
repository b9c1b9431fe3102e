#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "symor/basis.hpp"
#include "symor/rom.hpp"

namespace symor {

struct ExperimentOptions {
  int jobs = 1;
  BasisOptions basis;
  double preservation_tolerance = kPreservationTolerance;
  // Keep the drift profile of this test index for plotting (-1: none).
  Index profile_test_index = 0;
};

struct BasisRecord {
  BasisMethod method{};
  Index size = 0;
  bool ok = false;
  std::string reason;
  Index actual_size = 0;
  double o_v = 0.0;
  double s_v = 0.0;
  double e_l2 = 0.0;
  std::string warning;
};

struct CellRecord {
  BasisMethod method{};
  Index size = 0;
  Index test_index = 0;
  LameParameters mu;
  bool ok = false;
  std::string reason;
  double rel_error = 0.0;
  bool preserved = false;
  double max_drift = 0.0;
  Vector drift_profile;  // only for ExperimentOptions::profile_test_index
};

struct TimingRecord {
  std::string stage;
  std::string label;
  double seconds = 0.0;
};

struct EvaluationReport {
  std::vector<BasisRecord> bases;
  std::vector<CellRecord> cells;
  std::vector<TimingRecord> timings;
  double snapshot_norm_sq = 0.0;
  Vector singular_values;       // of the snapshot matrix
  Vector symplectic_singular;   // sigma_s, empty when the decomposition failed
  Vector weights;               // weighted symplectic singular values
  std::vector<std::string> warnings;
  std::vector<double> scales;   // Hamiltonian scale per test parameter
};

// Builds every basis from the training snapshots only, then evaluates each
// (method, size) on every test parameter. Failures are recorded per cell.
EvaluationReport run_generalization_experiment(const ExperimentDesign& design, const SystemBuilder& build,
                                               const SnapshotMatrix& training, const std::vector<BasisMethod>& methods,
                                               const ExperimentOptions& opts);

struct BoxStats {
  Index count = 0;
  double q1 = 0, median = 0, q3 = 0, whisker_low = 0, whisker_high = 0;
  std::vector<double> outliers;
};

// Quartiles by linear interpolation between order statistics (position
// (N - 1) p); whiskers reach the most extreme data within 1.5 IQR.
BoxStats box_stats(std::vector<double> values);
double median(std::vector<double> values);

// Long-format report: method,size,test_index,lambda,mu,metric,value,status.
std::string report_csv(const EvaluationReport& r);
std::string summary_json(const EvaluationReport& r);
std::string timings_csv(const EvaluationReport& r);

// Figure data (CSV) plus a matplotlib script per figure.
void write_figure_data(const std::filesystem::path& dir, const EvaluationReport& r);

}  // namespace symor
