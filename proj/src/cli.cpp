#include "symor/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symor/config.hpp"
#include "symor/experiment.hpp"
#include "symor/io.hpp"

namespace symor::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::vector<Index> sizes;
  std::string snapshots;
};

RunConfig resolve(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) c.output = o.out;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.seed) c.seed = *o.seed;
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& m : o.methods) c.methods.push_back(basis_method_from_string(m));
  }
  if (!o.sizes.empty()) c.sweep = o.sizes;
  validate(c);
  return c;
}

void prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output, ec);
  if (ec) throw IoError("cannot create output directory '" + c.output.string() + "': " + ec.message());
  write_text(c.output / "resolved_config.json", resolved_config_json(c));
}

std::string manifest_json(const SnapshotMatrix& s, const std::string& file, const std::string& hash) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : s.params) params.push_back({{"lambda", p.lambda}, {"mu", p.mu}});
  nlohmann::json m = {{"file", file},
                      {"sha256", hash},
                      {"rows", s.data.rows()},
                      {"cols", s.data.cols()},
                      {"nt", s.nt},
                      {"num_params", s.params.size()},
                      {"params", params}};
  return m.dump(2) + "\n";
}

SnapshotMatrix training_snapshots(const RunConfig& c, const Options& o) {
  if (!o.snapshots.empty()) return read_snapshots(o.snapshots);
  return snapshot_collect(c.design(), [&](const LameParameters& mu) { return c.build(mu); }, c.jobs);
}

int cmd_snapshots(const RunConfig& c) {
  const SnapshotMatrix s =
      snapshot_collect(c.design(), [&](const LameParameters& mu) { return c.build(mu); }, c.jobs);
  const fs::path file = c.output / "snapshots.bin";
  write_snapshots(file, s);
  const std::string hash = sha256_file(file);
  write_text(c.output / "snapshots_manifest.json", manifest_json(s, "snapshots.bin", hash));
  std::cout << "snapshots: " << s.data.rows() << " x " << s.data.cols() << " sha256 " << hash << "\n";
  return kOk;
}

std::string spectra_csv(BasisMethod m, const BasisGenerator& gen) {
  std::ostringstream os;
  if (const SvdLikeFactors* f = gen.factors()) {
    const WeightedSpectrum w = weighted_spectrum(*f);
    os << "index,type,sigma_s,weight,norm_s_i,norm_s_n_plus_i\n";
    for (Index i = 0; i < w.weights.size(); ++i) {
      const bool pair = i < f->num_pairs;
      os << i << "," << (pair ? "pair" : "unit") << "," << format_double(pair ? f->sigma(i) : 1.0) << ","
         << format_double(w.weights(i)) << "," << format_double(w.column_norm_pairs(i, 0)) << ","
         << format_double(w.column_norm_pairs(i, 1)) << "\n";
    }
    return os.str();
  }
  const Vector s = gen.spectrum();
  os << "index," << (m == BasisMethod::psd_greedy ? "loss_after_pick" : "singular_value") << "\n";
  for (Index i = 0; i < s.size(); ++i) os << i << "," << format_double(s(i)) << "\n";
  return os.str();
}

// Writes basis, metrics and spectra for one method; returns the worst exit code.
int emit_bases(const RunConfig& c, BasisMethod m, const Matrix& x, const std::vector<Index>& sizes) {
  const std::string name(to_string(m));
  const Index prepared = *std::max_element(sizes.begin(), sizes.end());
  std::unique_ptr<BasisGenerator> gen;
  std::string gen_failure;
  int code = kOk;
  try {
    gen = make_generator(m, x, prepared, c.basis);
    write_text(c.output / ("spectra_" + name + ".csv"), spectra_csv(m, *gen));
  } catch (const IoError&) {
    throw;
  } catch (const GapError& e) {
    gen_failure = e.what();
    code = kGapError;
  } catch (const Error& e) {
    gen_failure = e.what();
    code = kNumericalError;
  }
  if (!gen) std::cerr << name << ": " << gen_failure << "\n";
  const double xx = x.squaredNorm();
  for (Index size : sizes) {
    const std::string stem = "basis_" + name + "_" + std::to_string(size);
    nlohmann::json metrics = {{"method", name}, {"size", size}};
    if (!gen) {
      metrics["status"] = "failed: " + gen_failure;
      write_text(c.output / (stem + ".json"), metrics.dump(2) + "\n");
      continue;
    }
    try {
      const ReducedBasis v = gen->basis(size);
      write_basis(c.output / (stem + ".bin"), v);
      const double e = projection_error(v, x);
      metrics["status"] = "ok";
      metrics["kind"] = std::string(to_string(v.kind()));
      metrics["actual_size"] = v.size();
      metrics["o_v"] = orthonormality_measure(v.matrix());
      metrics["s_v"] = symplecticity_measure(v.matrix());
      metrics["pod_loss"] = pod_loss(v, x);
      if (v.symplectic()) metrics["psd_loss"] = psd_loss(v, x);
      metrics["e_l2"] = e;
      metrics["e_l2_relative"] = xx > 0 ? e / xx : 0.0;
      if (v.size() != size) metrics["warning"] = gen->warning();
      std::cout << stem << ": s_v " << format_double(metrics["s_v"].get<double>()) << " o_v "
                << format_double(metrics["o_v"].get<double>()) << " e_l2 " << format_double(e) << "\n";
    } catch (const GapError& e) {
      metrics["status"] = std::string("gap failure: ") + e.what();
      metrics["sigma_kept"] = e.sigma_kept();
      metrics["sigma_next"] = e.sigma_next();
      std::cerr << stem << ": " << e.what() << "\n";
      code = std::max<int>(code, kGapError);
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      metrics["status"] = std::string("failed: ") + e.what();
      std::cerr << stem << ": " << e.what() << "\n";
      if (code == kOk) code = kNumericalError;
    }
    write_text(c.output / (stem + ".json"), metrics.dump(2) + "\n");
  }
  return code;
}

int cmd_basis(const RunConfig& c, const Options& o) {
  const SnapshotMatrix s = training_snapshots(c, o);
  int code = kOk;
  for (BasisMethod m : c.methods) {
    const int rc = emit_bases(c, m, s.data, c.sweep);
    if (rc != kOk && (code == kOk || rc == kGapError)) code = rc;
  }
  return code;
}

int cmd_evaluate(const RunConfig& c, const Options& o) {
  const SnapshotMatrix s = training_snapshots(c, o);
  ExperimentOptions opts;
  opts.jobs = c.jobs;
  opts.basis = c.basis;
  opts.preservation_tolerance = c.preservation_tolerance;
  const EvaluationReport r = run_generalization_experiment(
      c.design(), [&](const LameParameters& mu) { return c.build(mu); }, s, c.methods, opts);
  write_text(c.output / "report.csv", report_csv(r));
  write_text(c.output / "summary.json", summary_json(r));
  write_text(c.output / "timings.csv", timings_csv(r));
  write_figure_data(c.output / "figures", r);
  std::size_t failed = 0;
  for (const auto& cell : r.cells)
    if (!cell.ok) ++failed;
  std::cout << "evaluate: " << r.cells.size() << " cells, " << failed << " failed\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const GapError& e) {
    std::cerr << "gap failure: " << e.what() << "\n";
    return kGapError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Symplectic model order reduction experiments"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--out", o.out, "Output directory (overrides the config)");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for the test parameters");
  };
  auto* snapshots = app.add_subcommand("snapshots", "Integrate the training parameters and store the snapshots");
  auto* basis = app.add_subcommand("basis", "Build reduced bases from the training snapshots");
  auto* evaluate = app.add_subcommand("evaluate", "Run the generalization experiment");
  auto* all = app.add_subcommand("all", "snapshots, basis and evaluate in one go");
  for (auto* sub : {snapshots, basis, evaluate, all}) common(sub);
  for (auto* sub : {basis, evaluate, all}) {
    sub->add_option("--method", o.methods, "Basis method (repeatable)");
    sub->add_option("--size", o.sizes, "Basis size 2k (repeatable)");
  }
  for (auto* sub : {basis, evaluate}) sub->add_option("--snapshots", o.snapshots, "Snapshot container to use");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  return guarded([&] {
    const RunConfig c = resolve(o);
    prepare_output(c);
    if (snapshots->parsed()) return cmd_snapshots(c);
    if (basis->parsed()) return cmd_basis(c, o);
    if (evaluate->parsed()) return cmd_evaluate(c, o);
    int code = cmd_snapshots(c);
    Options reuse = o;
    reuse.snapshots = (c.output / "snapshots.bin").string();
    const int rc = cmd_basis(c, reuse);
    if (rc != kOk) code = rc;
    cmd_evaluate(c, reuse);
    return code;
  });
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("symor");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace symor::cli
