#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "support.hpp"
#include "symor/io.hpp"

using namespace symor;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "symor_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("snapshot container round trip") {
  SnapshotMatrix s;
  s.data = gaussian(8, 6, 3);
  s.nt = 3;
  s.params = {{40e9, 50e9}, {60e9, 70e9}};
  const fs::path p = scratch("snap.bin");
  write_snapshots(p, s);
  const SnapshotMatrix r = read_snapshots(p);
  CHECK(r.nt == 3);
  REQUIRE(r.params.size() == 2);
  CHECK(r.params[1].lambda == 60e9);
  CHECK(r.params[1].mu == 70e9);
  CHECK((r.data - s.data).norm() == 0.0);
  CHECK(fs::file_size(p) == 8 + 4 + 4 + 4 * 8 + 4 * 8 + 48 * 8);
}

TEST_CASE("basis container round trip") {
  for (BasisKind kind : {BasisKind::orthonormal_symplectic, BasisKind::symplectic, BasisKind::orthonormal}) {
    const ReducedBasis v(orthosymplectic(5, 2, 9), kind);
    const fs::path p = scratch("basis.bin");
    write_basis(p, v);
    const ReducedBasis r = read_basis(p);
    CHECK(r.kind() == kind);
    CHECK((r.matrix() - v.matrix()).norm() == 0.0);
  }
}

TEST_CASE("malformed containers raise IoError") {
  CHECK_THROWS_AS(read_snapshots(scratch("missing.bin")), IoError);
  CHECK_THROWS_AS(read_basis(scratch("missing.bin")), IoError);

  const fs::path bad = scratch("bad.bin");
  write_text(bad, "NOTASNAPxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_snapshots(bad), IoError);
  CHECK_THROWS_AS(read_basis(bad), IoError);

  // Valid header, truncated payload.
  SnapshotMatrix s;
  s.data = gaussian(4, 2, 1);
  s.nt = 2;
  s.params = {{40e9, 50e9}};
  const fs::path p = scratch("trunc.bin");
  write_snapshots(p, s);
  fs::resize_file(p, fs::file_size(p) - 8);
  CHECK_THROWS_AS(read_snapshots(p), IoError);
  CHECK_THROWS_AS(read_text(scratch("missing.txt")), IoError);
}

TEST_CASE("trajectory CSV") {
  Trajectory tr;
  tr.grid = {0.0, 1.0, 3};
  tr.states = Matrix::Zero(2, 3);
  tr.states(1, 2) = 0.25;
  const fs::path p = scratch("traj.csv");
  write_trajectory_csv(p, tr);
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x0,x1");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 3);
  CHECK(last == "1,0,0.25");
}

TEST_CASE("format_double round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::min(), 0.0})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const fs::path p = scratch("abc.txt");
  write_text(p, "abc");
  CHECK(sha256_file(p) == sha256_hex("abc"));
  CHECK(read_text(p) == "abc");
}
