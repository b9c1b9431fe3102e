#include <doctest.h>

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "symor/cli.hpp"
#include "symor/config.hpp"
#include "symor/io.hpp"

using namespace symor;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kSmoke = R"({
  "model": {"nx": 6, "ny": 2, "length": 3.0, "forcing": {"kind": "constant_tip", "amplitude": 1.0}},
  "design": {"training_per_axis": 3, "num_test": 4, "t_end": 0.072, "nt": 2, "sweep": [2, 4, 6, 8]}
})";

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "symor_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path smoke_config(const fs::path& dir) {
  const fs::path p = dir / "smoke.json";
  write_text(p, kSmoke);
  return p;
}

int run(std::vector<std::string> args) { return cli::run(args); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(read_text(p));
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig d = parse_config("{}");
  CHECK(d.lattice.nx == 30);
  CHECK(d.nt == 151);
  CHECK(d.num_test == 16);
  CHECK(d.seed == 20190301);
  CHECK(d.methods.size() == 7);
  CHECK_THROWS_AS(parse_config(R"({"modle": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"nx": "ten"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["pod_everything"]})"), ConfigError);

  const RunConfig s = parse_config(kSmoke);
  const json r = json::parse(resolved_config_json(s));
  CHECK(r["model"]["nx"] == 6);
  CHECK(r["design"]["seed"] == 20190301);
  CHECK(r["tolerances"]["preservation"] == 1e-10);
  // The resolved form parses back to the same configuration.
  CHECK(resolved_config_json(parse_config(resolved_config_json(s))) == resolved_config_json(s));
}

TEST_CASE("snapshots subcommand") {
  const fs::path dir = workdir("snap");
  const fs::path cfg = smoke_config(dir);
  REQUIRE(run({"snapshots", "--config", cfg.string(), "--out", (dir / "a").string()}) == cli::kOk);
  const SnapshotMatrix s = read_snapshots(dir / "a" / "snapshots.bin");
  CHECK(s.data.rows() == 72);
  CHECK(s.data.cols() == 18);
  const json m = json::parse(read_text(dir / "a" / "snapshots_manifest.json"));
  CHECK(m["cols"] == 18);
  CHECK(m["sha256"] == sha256_file(dir / "a" / "snapshots.bin"));
  CHECK(fs::exists(dir / "a" / "resolved_config.json"));

  REQUIRE(run({"snapshots", "--config", cfg.string(), "--out", (dir / "b").string(), "--jobs", "2"}) == cli::kOk);
  CHECK(read_text(dir / "a" / "snapshots_manifest.json") == read_text(dir / "b" / "snapshots_manifest.json"));
}

TEST_CASE("basis subcommand") {
  const fs::path dir = workdir("basis");
  const fs::path cfg = smoke_config(dir);
  REQUIRE(run({"basis", "--config", cfg.string(), "--out", dir.string(), "--method", "psd_svd_like", "--size",
               "4"}) == cli::kOk);
  CHECK(fs::exists(dir / "basis_psd_svd_like_4.bin"));
  const json m = json::parse(read_text(dir / "basis_psd_svd_like_4.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["s_v"].get<double>() < 1e-6);
  const ReducedBasis v = read_basis(dir / "basis_psd_svd_like_4.bin");
  CHECK(v.size() == 4);
  CHECK(symplecticity_measure(v.matrix()) == doctest::Approx(m["s_v"].get<double>()));

  const auto rows = read_csv(dir / "spectra_psd_svd_like.csv");
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0].size() == 6);
  CHECK(rows[0][0] == "index");
  // One row per pair and unit column, pairs first.
  std::size_t units = 0;
  bool seen_unit = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][1] == "unit") {
      ++units;
      seen_unit = true;
    } else {
      CHECK_FALSE(seen_unit);
    }
  }
  CHECK(rows.size() - 1 >= units);
}

TEST_CASE("gap failure exits with its own code") {
  const fs::path dir = workdir("gap");
  const fs::path cfg = smoke_config(dir);
  SnapshotMatrix s;
  s.data = Matrix::Zero(72, 2);
  s.data(0, 0) = 1.0;
  s.data(1, 1) = 1.0;
  s.nt = 2;
  s.params = {{50e9, 50e9}};
  write_snapshots(dir / "contrived.bin", s);
  const int rc = run({"basis", "--config", cfg.string(), "--out", (dir / "out").string(), "--snapshots",
                      (dir / "contrived.bin").string(), "--method", "pod_of_ys", "--size", "2"});
  CHECK(rc == cli::kGapError);
  const json m = json::parse(read_text(dir / "out" / "basis_pod_of_ys_2.json"));
  CHECK(m["status"].get<std::string>().rfind("gap failure", 0) == 0);
}

TEST_CASE("exit codes for configuration and IO errors") {
  const fs::path dir = workdir("codes");
  write_text(dir / "bad.json", R"({"design": {"nt": 1}})");
  CHECK(run({"snapshots", "--config", (dir / "bad.json").string(), "--out", dir.string()}) == cli::kConfigError);
  write_text(dir / "unknown.json", R"({"extra": 1})");
  CHECK(run({"snapshots", "--config", (dir / "unknown.json").string()}) == cli::kConfigError);
  CHECK(run({"frobnicate"}) == cli::kConfigError);
  CHECK(run({"basis", "--jobs", "0"}) == cli::kConfigError);
  CHECK(run({"snapshots", "--config", (dir / "missing.json").string()}) == cli::kIoError);
  const fs::path cfg = smoke_config(dir);
  CHECK(run({"basis", "--config", cfg.string(), "--out", dir.string(), "--snapshots",
             (dir / "missing.bin").string()}) == cli::kIoError);
  // The output path is a regular file.
  write_text(dir / "occupied", "x");
  CHECK(run({"snapshots", "--config", cfg.string(), "--out", (dir / "occupied").string()}) == cli::kIoError);
}

TEST_CASE("evaluate and all on the smoke configuration") {
  const fs::path dir = workdir("all");
  const fs::path cfg = smoke_config(dir);
  const auto start = std::chrono::steady_clock::now();
  REQUIRE(run({"evaluate", "--config", cfg.string(), "--out", (dir / "eval").string()}) == cli::kOk);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 60.0);

  for (const char* f : {"report.csv", "summary.json", "timings.csv", "resolved_config.json"})
    CHECK(fs::exists(dir / "eval" / f));
  const auto report = read_csv(dir / "eval" / "report.csv");
  std::map<std::pair<std::string, std::string>, int> preserved;
  std::size_t cells = 0;
  for (std::size_t i = 1; i < report.size(); ++i) {
    if (report[i][5] != "hamiltonian_preserved") continue;
    ++cells;
    if (report[i][6] == "1") ++preserved[{report[i][0], report[i][1]}];
  }
  CHECK(cells == 7 * 4 * 4);

  // Figure counts agree with the report.
  const auto counts = read_csv(dir / "eval" / "figures" / "preservation_counts.csv");
  REQUIRE(counts.size() > 1);
  const auto& head = counts[0];
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  };
  REQUIRE(col("preserved") < head.size());
  for (std::size_t i = 1; i < counts.size(); ++i) {
    const auto& r = counts[i];
    CHECK(std::stoi(r[col("preserved")]) == preserved[{r[col("method")], r[col("size")]}]);
  }

  REQUIRE(run({"all", "--config", cfg.string(), "--out", (dir / "full").string()}) == cli::kOk);
  for (const char* f : {"snapshots.bin", "snapshots_manifest.json", "resolved_config.json", "report.csv",
                        "summary.json", "timings.csv", "spectra_psd_svd_like.csv", "basis_pod_full_8.bin",
                        "basis_psd_greedy_2.json", "figures/relerr_boxplot.csv"})
    CHECK_MESSAGE(fs::exists(dir / "full" / f), f);
  CHECK(read_text(dir / "full" / "report.csv") == read_text(dir / "eval" / "report.csv"));
}
