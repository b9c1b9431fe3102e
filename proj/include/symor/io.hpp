#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "symor/integrator.hpp"

namespace symor {

// Snapshot container, little-endian:
//   "SYMORSNP" | u32 version | u32 reserved | u64 rows | u64 cols | u64 nt |
//   u64 num_params | f64 (lambda, mu) * num_params | f64 data, column-major
// Column j belongs to parameter j / nt at time index j % nt.
void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& s);
SnapshotMatrix read_snapshots(const std::filesystem::path& path);

// Basis container, little-endian:
//   "SYMORBAS" | u32 version | u32 kind | u64 rows | u64 cols | f64 data, column-major
// kind: 0 orthonormal_symplectic, 1 symplectic, 2 orthonormal.
void write_basis(const std::filesystem::path& path, const ReducedBasis& v);
ReducedBasis read_basis(const std::filesystem::path& path);

// Header "t,x0,x1,...", one row per time step.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

// Shortest round-trip decimal representation.
std::string format_double(double v);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace symor
