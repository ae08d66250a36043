#pragma once

#include <string>
#include <variant>

#include "smap/fields.hpp"

namespace smap::harness {

/// Binary field snapshot:
///   "SMAPFLD1", u32 d, d x u32 n, f64 period, f64 time, u8 kind (0 complex,
///   1 sphere), then samples row-major (last axis fastest) as little-endian
///   f64: (re, im) for complex, (s1, s2, s3) for sphere.
/// Grids are cubic, so every per-axis extent must agree on read.
using Snapshot = std::variant<ComplexFieldd, SphereFieldd>;

void write_snapshot(const std::string& path, const ComplexFieldd& field);
void write_snapshot(const std::string& path, const SphereFieldd& field);

/// Throws FormatError on a bad magic, unknown kind, or a payload whose
/// length differs from what the header implies.
Snapshot read_snapshot(const std::string& path);

}  // namespace smap::harness
