#include "smap/harness/seeded_data.hpp"

#include <random>

#include "smap/geometry.hpp"

namespace smap::harness {

ComplexFieldd seeded_data(const GridSpec& grid, const DataSpec& spec) {
  const auto& table = wave_table<double>(grid);
  const auto size = static_cast<Eigen::Index>(grid.size());
  ComplexValues<double> hat = ComplexValues<double>::Zero(size);
  if (spec.amplitude == 0.0) return ComplexFieldd(grid);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  switch (spec.kind) {
    case DataKind::gaussian_bump:
      for (Eigen::Index f = 0; f < size; ++f) hat(f) = std::exp(-0.5 * spec.width * spec.width * table.xi2(f));
      break;
    case DataKind::mode_sum: {
      // A handful of low modes with random complex weights.
      const int reach = std::max(1, grid.n / 8);
      std::uniform_int_distribution<int> pick(-reach, reach);
      std::vector<int> idx(grid.d);
      for (int term = 0; term < 4; ++term) {
        std::size_t flat = 0;
        for (int a = 0; a < grid.d; ++a) {
          const int m = pick(rng);
          flat = flat * grid.n + static_cast<std::size_t>((m + grid.n) % grid.n);
        }
        hat(static_cast<Eigen::Index>(flat)) += std::complex<double>(normal(rng), normal(rng));
      }
      break;
    }
    case DataKind::random_bandlimited: {
      // Gaussian coefficients with algebraic decay inside a third of Nyquist.
      const double band = grid.nyquist() / 3.0;
      for (Eigen::Index f = 0; f < size; ++f) {
        const std::complex<double> z(normal(rng), normal(rng));
        if (table.xi2(f) <= band * band) hat(f) = z * std::pow(1.0 + table.xi2(f), -(spec.sigma / 2.0 + 1.0));
      }
      break;
    }
  }
  hat *= table.two_thirds_keep.cast<std::complex<double>>();
  ComplexFieldd phi(grid, std::move(hat), Representation::frequency);
  phi.values() *= spec.amplitude / sobolev_norm(phi, spec.sigma);
  return to_physical(phi);
}

SphereFieldd seeded_sphere(const GridSpec& grid, const DataSpec& spec) {
  return stereo_lift(seeded_data(grid, spec));
}

}  // namespace smap::harness
