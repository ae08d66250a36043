#pragma once

#include <cstdint>

#include "smap/fields.hpp"
#include "smap/harness/config.hpp"

namespace smap::harness {

struct DataSpec {
  DataKind kind = DataKind::gaussian_bump;
  double amplitude = 1e-3;  ///< target ||phi||_{H^sigma}
  double sigma = 1.6;
  double width = 1.0;       ///< gaussian_bump width
  std::uint64_t seed = 0;
};

/// Smooth chart data with ||phi||_{H^sigma} = amplitude, spectrum inside the
/// 2/3 box. gaussian_bump is seed-independent (centred periodized Gaussian);
/// mode_sum and random_bandlimited draw from std::mt19937_64(seed).
ComplexFieldd seeded_data(const GridSpec& grid, const DataSpec& spec);

/// Sphere data lifted from seeded_data through the stereographic chart.
SphereFieldd seeded_sphere(const GridSpec& grid, const DataSpec& spec);

}  // namespace smap::harness
