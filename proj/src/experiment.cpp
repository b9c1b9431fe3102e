#include "symor/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "symor/io.hpp"
#include "symor/parallel.hpp"

namespace symor {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string clean(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

std::string describe(const std::exception& e) { return clean(e.what()); }

constexpr double kClamp = 1.0;

}  // namespace

EvaluationReport run_generalization_experiment(const ExperimentDesign& design, const SystemBuilder& build,
                                               const SnapshotMatrix& training, const std::vector<BasisMethod>& methods,
                                               const ExperimentOptions& opts) {
  EvaluationReport rep;
  const Matrix& x = training.data;
  rep.snapshot_norm_sq = x.squaredNorm();
  rep.singular_values = singular_values(x);

  std::vector<Index> sizes = design.sweep;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  const Index prepared = sizes.empty() ? 0 : sizes.back();

  // Bases, one generator per method.
  const std::size_t nm = methods.size();
  const std::size_t ns = sizes.size();
  std::vector<std::optional<ReducedBasis>> bases(nm * ns);
  rep.bases.resize(nm * ns);
  std::vector<double> gen_time(nm, 0.0);
  std::vector<std::string> gen_warning(nm);
  std::vector<Vector> sigma_s(nm), weights(nm);
  parallel_for(nm, opts.jobs, [&](std::size_t mi) {
    const BasisMethod m = methods[mi];
    const auto t0 = Clock::now();
    std::unique_ptr<BasisGenerator> gen;
    std::string fail;
    try {
      gen = make_generator(m, x, prepared, opts.basis);
    } catch (const Error& e) {
      fail = describe(e);
    }
    gen_time[mi] = seconds_since(t0);
    if (gen) {
      gen_warning[mi] = gen->warning();
      if (const auto* f = gen->factors()) {
        sigma_s[mi] = f->sigma;
        weights[mi] = gen->spectrum();
      }
    }
    for (std::size_t si = 0; si < ns; ++si) {
      BasisRecord& rec = rep.bases[mi * ns + si];
      rec.method = m;
      rec.size = sizes[si];
      if (!gen) {
        rec.reason = fail;
        continue;
      }
      try {
        ReducedBasis v = gen->basis(sizes[si]);
        rec.actual_size = v.size();
        rec.o_v = orthonormality_measure(v.matrix());
        rec.s_v = symplecticity_measure(v.matrix());
        rec.e_l2 = projection_error(v, x);
        if (v.size() != sizes[si]) rec.warning = gen_warning[mi];
        rec.ok = true;
        bases[mi * ns + si] = std::move(v);
      } catch (const Error& e) {
        rec.reason = describe(e);
      }
    }
  });
  for (std::size_t mi = 0; mi < nm; ++mi) {
    rep.timings.push_back({"basis", std::string(to_string(methods[mi])), gen_time[mi]});
    if (!gen_warning[mi].empty()) rep.warnings.push_back(gen_warning[mi]);
    if (rep.symplectic_singular.size() == 0 && sigma_s[mi].size() > 0) {
      rep.symplectic_singular = sigma_s[mi];
      rep.weights = weights[mi];
    }
  }

  // Full-model reference solutions on the test parameters.
  const std::size_t nt = design.test.size();
  std::vector<Matrix> full(nt);
  std::vector<std::optional<LinearHamiltonianSystem>> systems(nt);
  std::vector<std::string> full_fail(nt);
  rep.scales.assign(nt, std::numeric_limits<double>::quiet_NaN());
  const auto t_full = Clock::now();
  parallel_for(nt, opts.jobs, [&](std::size_t ti) {
    try {
      systems[ti] = build(design.test[ti]);
      Trajectory tr = implicit_midpoint_linear(*systems[ti], design.grid);
      rep.scales[ti] = hamiltonian_scale(*systems[ti], tr);
      full[ti] = std::move(tr.states);
    } catch (const Error& e) {
      full_fail[ti] = describe(e);
    }
  });
  rep.timings.push_back({"full_model", "all_test_parameters", seconds_since(t_full)});

  // Reduced models, one task per (method, size).
  rep.cells.resize(nm * ns * nt);
  std::vector<double> rom_time(nm * ns, 0.0);
  const LinearHamiltonianSystem* prototype = nullptr;
  for (const auto& sys : systems)
    if (sys) {
      prototype = &*sys;
      break;
    }
  parallel_for(nm * ns, opts.jobs, [&](std::size_t bi) {
    const auto t0 = Clock::now();
    const BasisRecord& brec = rep.bases[bi];
    std::optional<ReducedModelFactory> factory;
    std::string fail = brec.ok ? std::string() : "basis unavailable: " + brec.reason;
    if (brec.ok && prototype) {
      try {
        factory.emplace(*prototype, *bases[bi], default_mode(*bases[bi]));
      } catch (const Error& e) {
        fail = describe(e);
      }
    }
    for (std::size_t ti = 0; ti < nt; ++ti) {
      CellRecord& c = rep.cells[bi * nt + ti];
      c.method = brec.method;
      c.size = brec.size;
      c.test_index = static_cast<Index>(ti);
      c.mu = design.test[ti];
      if (!factory) {
        c.reason = fail.empty() ? "no reduced model" : fail;
        continue;
      }
      if (!full_fail[ti].empty()) {
        c.reason = "full model failed: " + full_fail[ti];
        continue;
      }
      try {
        const ReducedSolution sol = solve_reduced(factory->assemble(*systems[ti]), design.grid);
        c.rel_error = relative_error(full[ti], sol.trajectory.states, *bases[bi]);
        DriftResult d = hamiltonian_drift(sol.hamiltonian, rep.scales[ti], opts.preservation_tolerance);
        c.preserved = d.preserved;
        c.max_drift = d.max_drift;
        if (static_cast<Index>(ti) == opts.profile_test_index) c.drift_profile = std::move(d.profile);
        c.ok = std::isfinite(c.rel_error);
        if (!c.ok) c.reason = "non-finite reduced solution";
      } catch (const Error& e) {
        c.reason = describe(e);
      }
    }
    rom_time[bi] = seconds_since(t0);
  });
  for (std::size_t bi = 0; bi < nm * ns; ++bi)
    rep.timings.push_back({"reduced_models",
                           std::string(to_string(rep.bases[bi].method)) + ":" + std::to_string(rep.bases[bi].size),
                           rom_time[bi]});
  return rep;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return box_stats(std::move(values)).median;
}

BoxStats box_stats(std::vector<double> v) {
  BoxStats b;
  b.count = static_cast<Index>(v.size());
  if (v.empty()) {
    b.q1 = b.median = b.q3 = b.whisker_low = b.whisker_high = std::numeric_limits<double>::quiet_NaN();
    return b;
  }
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
      continue;
    }
    b.whisker_low = std::min(b.whisker_low, x);
    b.whisker_high = std::max(b.whisker_high, x);
  }
  return b;
}

std::string report_csv(const EvaluationReport& r) {
  std::ostringstream os;
  os << "method,size,test_index,lambda,mu,metric,value,status\n";
  const std::size_t nb = r.bases.size();
  const std::size_t nt = nb == 0 ? 0 : r.cells.size() / nb;
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const BasisRecord& b = r.bases[bi];
    const std::string head = std::string(to_string(b.method)) + "," + std::to_string(b.size) + ",,,,";
    const std::string status = b.ok ? "ok" : "failed: " + b.reason;
    auto emit = [&](const char* metric, double v) {
      os << head << metric << "," << (b.ok ? format_double(v) : "nan") << "," << status << "\n";
    };
    emit("o_v", b.o_v);
    emit("s_v", b.s_v);
    emit("e_l2", b.e_l2);
    emit("e_l2_relative", r.snapshot_norm_sq > 0 ? b.e_l2 / r.snapshot_norm_sq : 0.0);
    emit("basis_size", static_cast<double>(b.actual_size));
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const CellRecord& c = r.cells[bi * nt + ti];
      const std::string chead = std::string(to_string(c.method)) + "," + std::to_string(c.size) + "," +
                                std::to_string(c.test_index) + "," + format_double(c.mu.lambda) + "," +
                                format_double(c.mu.mu) + ",";
      const std::string cstatus = c.ok ? "ok" : "failed: " + c.reason;
      auto cemit = [&](const char* metric, double v) {
        os << chead << metric << "," << (c.ok ? format_double(v) : "nan") << "," << cstatus << "\n";
      };
      cemit("rel_error", c.rel_error);
      cemit("hamiltonian_preserved", c.preserved ? 1.0 : 0.0);
      cemit("hamiltonian_max_drift", c.max_drift);
    }
  }
  return os.str();
}

std::string summary_json(const EvaluationReport& r) {
  using nlohmann::json;
  json root;
  root["snapshot_frobenius_sq"] = r.snapshot_norm_sq;
  root["num_singular_values"] = r.singular_values.size();
  root["num_symplectic_singular_values"] = r.symplectic_singular.size();
  root["warnings"] = r.warnings;
  json rows = json::array();
  const std::size_t nb = r.bases.size();
  const std::size_t nt = nb == 0 ? 0 : r.cells.size() / nb;
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const BasisRecord& b = r.bases[bi];
    std::vector<double> errs;
    Index preserved = 0, ok = 0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const CellRecord& c = r.cells[bi * nt + ti];
      if (!c.ok) continue;
      ++ok;
      errs.push_back(c.rel_error);
      if (c.preserved) ++preserved;
    }
    json row = {{"method", std::string(to_string(b.method))},
                {"size", b.size},
                {"status", b.ok ? std::string("ok") : "failed: " + b.reason},
                {"cells", nt},
                {"cells_ok", ok},
                {"preserved", preserved}};
    if (b.ok) {
      row["o_v"] = b.o_v;
      row["s_v"] = b.s_v;
      row["e_l2"] = b.e_l2;
    }
    if (!errs.empty()) {
      const BoxStats s = box_stats(errs);
      row["rel_error_median"] = s.median;
      row["rel_error_q1"] = s.q1;
      row["rel_error_q3"] = s.q3;
    }
    rows.push_back(row);
  }
  root["cells"] = rows;
  return root.dump(2) + "\n";
}

std::string timings_csv(const EvaluationReport& r) {
  std::ostringstream os;
  os << "stage,label,seconds\n";
  for (const auto& t : r.timings) os << t.stage << "," << t.label << "," << format_double(t.seconds) << "\n";
  return os.str();
}

namespace {

const char* kPlotProjection = R"(import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "proj_error_vs_size.csv"
series = defaultdict(list)
with open(path) as fh:
    for row in csv.DictReader(fh):
        if row["status"] == "ok":
            series[row["method"]].append((int(row["size"]), float(row["e_l2_relative"])))
for method, pts in series.items():
    pts.sort()
    plt.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts], marker="o", label=method)
plt.xlabel("basis size 2k")
plt.ylabel("relative projection error")
plt.legend()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)";

const char* kPlotSpectra = R"(import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "spectra_decay.csv"
cols = {"sigma_relative": [], "sigma_s_relative": [], "weight_relative": []}
with open(path) as fh:
    for row in csv.DictReader(fh):
        for key in cols:
            if row[key] not in ("", "nan"):
                cols[key].append((int(row["index"]), float(row[key])))
for key, pts in cols.items():
    if pts:
        plt.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts], label=key)
plt.xlabel("index")
plt.ylabel("value relative to the first")
plt.legend()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)";

const char* kPlotPreservation = R"(import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "preservation_counts.csv"
rows = list(csv.DictReader(open(path)))
methods = list(dict.fromkeys(r["method"] for r in rows))
sizes = sorted({int(r["size"]) for r in rows})
grid = np.full((len(methods), len(sizes)), np.nan)
for r in rows:
    total = int(r["total"])
    if total:
        grid[methods.index(r["method"]), sizes.index(int(r["size"]))] = int(r["preserved"]) / total
plt.imshow(grid, vmin=0, vmax=1, cmap="viridis", aspect="auto")
plt.yticks(range(len(methods)), methods)
plt.xticks(range(len(sizes)), sizes, rotation=90)
plt.colorbar(label="fraction of test parameters with preserved Hamiltonian")
plt.tight_layout()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)";

const char* kPlotBox = R"(import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "relerr_boxplot.csv"
stats = defaultdict(list)
for r in csv.DictReader(open(path)):
    if int(r["count"]) == 0:
        continue
    fliers = [float(v) for v in r["outliers"].split(";") if v]
    stats[r["method"]].append(dict(label=r["size"], q1=float(r["q1"]), med=float(r["median"]),
                                   q3=float(r["q3"]), whislo=float(r["whisker_low"]),
                                   whishi=float(r["whisker_high"]), fliers=fliers))
fig, axes = plt.subplots(len(stats), 1, figsize=(8, 2.2 * max(len(stats), 1)), squeeze=False)
for ax, (method, boxes) in zip(axes[:, 0], stats.items()):
    ax.bxp(boxes, showfliers=True)
    ax.set_yscale("log")
    ax.set_title(method)
    ax.set_ylabel("relative error")
axes[-1, 0].set_xlabel("basis size 2k")
plt.tight_layout()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)";

const char* kPlotDrift = R"(import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "hamiltonian_drift_profile.csv"
curves = defaultdict(list)
for r in csv.DictReader(open(path)):
    curves[(r["method"], int(r["size"]))].append((int(r["step"]), float(r["drift"])))
for (method, size), pts in sorted(curves.items()):
    plt.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts], label=f"{method} {size}", lw=0.8)
plt.axhline(1e-10, color="k", ls="--")
plt.xlabel("time step")
plt.ylabel("relative Hamiltonian drift")
plt.legend(fontsize=5, ncol=3)
plt.savefig(path.replace(".csv", ".png"), dpi=150)
)";

}  // namespace

void write_figure_data(const std::filesystem::path& dir, const EvaluationReport& r) {
  std::filesystem::create_directories(dir);
  const std::size_t nb = r.bases.size();
  const std::size_t nt = nb == 0 ? 0 : r.cells.size() / nb;

  {
    std::ostringstream os;
    os << "method,size,e_l2,e_l2_relative,status\n";
    for (const auto& b : r.bases) {
      os << to_string(b.method) << "," << b.size << "," << (b.ok ? format_double(b.e_l2) : "nan") << ","
         << (b.ok && r.snapshot_norm_sq > 0 ? format_double(b.e_l2 / r.snapshot_norm_sq) : "nan") << ","
         << (b.ok ? "ok" : "failed") << "\n";
    }
    write_text(dir / "proj_error_vs_size.csv", os.str());
    write_text(dir / "plot_proj_error_vs_size.py", kPlotProjection);
  }
  {
    std::ostringstream os;
    os << "index,sigma,sigma_relative,sigma_s,sigma_s_relative,weight,weight_relative\n";
    const Index len = std::max({r.singular_values.size(), r.symplectic_singular.size(), r.weights.size()});
    Vector w_sorted = r.weights;
    std::sort(w_sorted.data(), w_sorted.data() + w_sorted.size(), std::greater<double>());
    auto cell = [](const Vector& v, Index i) -> std::string {
      if (i >= v.size()) return ",";
      const double rel = v(0) > 0 ? v(i) / v(0) : 0.0;
      return format_double(v(i)) + "," + format_double(rel);
    };
    for (Index i = 0; i < len; ++i)
      os << i + 1 << "," << cell(r.singular_values, i) << "," << cell(r.symplectic_singular, i) << ","
         << cell(w_sorted, i) << "\n";
    write_text(dir / "spectra_decay.csv", os.str());
    write_text(dir / "plot_spectra_decay.py", kPlotSpectra);
  }
  {
    std::ostringstream os;
    os << "method,size,preserved,total\n";
    for (std::size_t bi = 0; bi < nb; ++bi) {
      Index preserved = 0, total = 0;
      for (std::size_t ti = 0; ti < nt; ++ti) {
        const CellRecord& c = r.cells[bi * nt + ti];
        if (!c.ok) continue;
        ++total;
        if (c.preserved) ++preserved;
      }
      os << to_string(r.bases[bi].method) << "," << r.bases[bi].size << "," << preserved << "," << total << "\n";
    }
    write_text(dir / "preservation_counts.csv", os.str());
    write_text(dir / "plot_preservation_counts.py", kPlotPreservation);
  }
  {
    std::ostringstream os;
    os << "method,size,count,q1,median,q3,whisker_low,whisker_high,outliers\n";
    for (std::size_t bi = 0; bi < nb; ++bi) {
      std::vector<double> vals;
      for (std::size_t ti = 0; ti < nt; ++ti) {
        const CellRecord& c = r.cells[bi * nt + ti];
        if (c.ok) vals.push_back(std::min(c.rel_error, kClamp));
      }
      const BoxStats s = box_stats(vals);
      os << to_string(r.bases[bi].method) << "," << r.bases[bi].size << "," << s.count << "," << format_double(s.q1)
         << "," << format_double(s.median) << "," << format_double(s.q3) << "," << format_double(s.whisker_low) << ","
         << format_double(s.whisker_high) << ",";
      for (std::size_t i = 0; i < s.outliers.size(); ++i) os << (i ? ";" : "") << format_double(s.outliers[i]);
      os << "\n";
    }
    write_text(dir / "relerr_boxplot.csv", os.str());
    write_text(dir / "plot_relerr_boxplot.py", kPlotBox);
  }
  {
    std::ostringstream os;
    os << "method,size,step,drift\n";
    for (const auto& c : r.cells) {
      for (Index i = 0; i < c.drift_profile.size(); ++i)
        os << to_string(c.method) << "," << c.size << "," << i << "," << format_double(c.drift_profile(i)) << "\n";
    }
    write_text(dir / "hamiltonian_drift_profile.csv", os.str());
    write_text(dir / "plot_hamiltonian_drift_profile.py", kPlotDrift);
  }
}

}  // namespace symor
