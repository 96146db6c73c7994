#include "fcs/field_io.hpp"

#include "fcs/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>

namespace fcs {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'C', 'S', 'F'};

template <class U> void put_le(std::ostream &os, U v) {
  unsigned char b[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i)
    b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char *>(b), sizeof(U));
}

template <class U> U get_le(std::istream &is, const char *what) {
  unsigned char b[sizeof(U)];
  if (!is.read(reinterpret_cast<char *>(b), sizeof(U)))
    throw FormatError(fmt::format("truncated file while reading {}", what));
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream &os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }

double get_f64(std::istream &is, const char *what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(is, what));
}

} // namespace

void write_field(std::ostream &os, const Field &u) {
  const auto &g = *u.grid;
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kFieldFormatVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.params().N));
  put_f64(os, g.params().s);
  put_f64(os, g.params().alpha);
  put_f64(os, g.R());
  put_le<std::uint64_t>(os, g.M());
  for (Eigen::Index j = 0; j < u.values.size(); ++j)
    put_f64(os, u.values[j]);
  if (!os)
    throw FormatError("write failed");
}

Field read_field(std::istream &is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()))
    throw FormatError("truncated file while reading magic");
  if (magic != kMagic)
    throw FormatError("bad magic: not an FCSF field file");
  const auto version = get_le<std::uint32_t>(is, "version");
  if (version != kFieldFormatVersion)
    throw FormatError(fmt::format("unsupported version {}", version));
  const auto N = get_le<std::uint32_t>(is, "N");
  const double s = get_f64(is, "s");
  const double alpha = get_f64(is, "alpha");
  const double R = get_f64(is, "R");
  const auto M = get_le<std::uint64_t>(is, "M");
  if (M > (std::uint64_t{1} << 32))
    throw FormatError(fmt::format("implausible node count {}", M));

  GridPtr grid;
  try {
    grid = make_grid(ProblemParams::make(static_cast<int>(N), s, alpha), R,
                     static_cast<std::size_t>(M));
  } catch (const Error &e) {
    throw FormatError(fmt::format("invalid header: {}", e.what()));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(M));
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    v[j] = get_f64(is, "node values");
    if (!std::isfinite(v[j]))
      throw FormatError(fmt::format("non-finite value at node {}", j + 1));
  }
  return Field(std::move(grid), std::move(v));
}

void save_field(const Field &u, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw FormatError(fmt::format("cannot open '{}' for writing", path));
  write_field(os, u);
}

Field load_field(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw FormatError(fmt::format("cannot open '{}'", path));
  return read_field(is);
}

} // namespace fcs
