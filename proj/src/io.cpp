#include "symor/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace symor {

namespace {

constexpr char kSnapshotMagic[8] = {'S', 'Y', 'M', 'O', 'R', 'S', 'N', 'P'};
constexpr char kBasisMagic[8] = {'S', 'Y', 'M', 'O', 'R', 'B', 'A', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
  }
  template <typename T>
  void put(T v) {
    v = to_little(v);
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void doubles(const double* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
      out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    } else {
      for (std::size_t i = 0; i < n; ++i) put(p[i]);
    }
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("write to '" + path_.string() + "' failed");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open '" + path.string() + "' for reading");
  }
  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    check();
    return to_little(v);
  }
  void bytes(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    check();
  }
  void doubles(double* p, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
      in_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
      check();
    } else {
      for (std::size_t i = 0; i < n; ++i) p[i] = get<double>();
    }
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in '" + path_.string() + "'");
  }

 private:
  void check() {
    if (!in_) throw IoError("truncated container '" + path_.string() + "'");
  }
  std::filesystem::path path_;
  std::ifstream in_;
};

void check_magic(Reader& r, const char (&magic)[8], const std::filesystem::path& path) {
  char m[8];
  r.bytes(m, 8);
  if (std::memcmp(m, magic, 8) != 0) throw IoError("'" + path.string() + "' is not a recognised container");
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw IoError("unsupported container version " + std::to_string(version));
}

std::uint32_t kind_code(BasisKind k) {
  switch (k) {
    case BasisKind::orthonormal_symplectic: return 0;
    case BasisKind::symplectic: return 1;
    case BasisKind::orthonormal: return 2;
  }
  return 2;
}

}  // namespace

void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& s) {
  Writer w(path);
  w.bytes(kSnapshotMagic, 8);
  w.put(kVersion);
  w.put(std::uint32_t{0});
  w.put(static_cast<std::uint64_t>(s.data.rows()));
  w.put(static_cast<std::uint64_t>(s.data.cols()));
  w.put(static_cast<std::uint64_t>(s.nt));
  w.put(static_cast<std::uint64_t>(s.params.size()));
  for (const auto& p : s.params) {
    w.put(p.lambda);
    w.put(p.mu);
  }
  w.doubles(s.data.data(), static_cast<std::size_t>(s.data.size()));
  w.close();
}

SnapshotMatrix read_snapshots(const std::filesystem::path& path) {
  Reader r(path);
  check_magic(r, kSnapshotMagic, path);
  r.get<std::uint32_t>();
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  const auto nt = r.get<std::uint64_t>();
  const auto np = r.get<std::uint64_t>();
  if (nt == 0 || np * nt != cols || rows % 2 != 0) throw IoError("inconsistent snapshot header in '" + path.string() + "'");
  SnapshotMatrix s;
  s.nt = static_cast<Index>(nt);
  for (std::uint64_t i = 0; i < np; ++i) {
    const double lam = r.get<double>();
    const double mu = r.get<double>();
    s.params.push_back({lam, mu});
  }
  s.data.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  r.doubles(s.data.data(), static_cast<std::size_t>(s.data.size()));
  r.expect_end();
  return s;
}

void write_basis(const std::filesystem::path& path, const ReducedBasis& v) {
  Writer w(path);
  w.bytes(kBasisMagic, 8);
  w.put(kVersion);
  w.put(kind_code(v.kind()));
  w.put(static_cast<std::uint64_t>(v.matrix().rows()));
  w.put(static_cast<std::uint64_t>(v.matrix().cols()));
  w.doubles(v.matrix().data(), static_cast<std::size_t>(v.matrix().size()));
  w.close();
}

ReducedBasis read_basis(const std::filesystem::path& path) {
  Reader r(path);
  check_magic(r, kBasisMagic, path);
  const auto code = r.get<std::uint32_t>();
  if (code > 2) throw IoError("unknown basis kind code " + std::to_string(code));
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  if (rows % 2 != 0 || cols % 2 != 0) throw IoError("basis container with odd dimensions");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  r.doubles(m.data(), static_cast<std::size_t>(m.size()));
  r.expect_end();
  const BasisKind kinds[3] = {BasisKind::orthonormal_symplectic, BasisKind::symplectic, BasisKind::orthonormal};
  return ReducedBasis(std::move(m), kinds[code]);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  std::ostringstream os;
  os << "t";
  for (Index r = 0; r < tr.states.rows(); ++r) os << ",x" << r;
  os << "\n";
  for (Index i = 0; i < tr.states.cols(); ++i) {
    os << format_double(tr.grid.time(i));
    for (Index r = 0; r < tr.states.rows(); ++r) os << ',' << format_double(tr.states(r, i));
    os << "\n";
  }
  write_text(path, os.str());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace symor
