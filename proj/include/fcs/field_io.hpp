#pragma once

#include "fcs/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fcs {

/// FCSF layout, little-endian: "FCSF", u32 version (1), u32 N, f64 s,
/// f64 alpha, f64 R, u64 M, then M f64 node values.
inline constexpr std::uint32_t kFieldFormatVersion = 1;

void write_field(std::ostream &os, const Field &u);
Field read_field(std::istream &is);

void save_field(const Field &u, const std::string &path);
Field load_field(const std::string &path);

} // namespace fcs
