#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "smap/errors.hpp"

namespace smap {

/// Uniform periodic grid on [-pi*P, pi*P)^d with n points per axis.
///
/// Samples are stored row-major with the last axis fastest. Wavenumbers live
/// on the lattice (1/P) Z^d; the signed mode index along an axis runs over
/// [-n/2, n/2), and the Nyquist index -n/2 is treated as absent for odd
/// multipliers (derivatives).
struct GridSpec {
  int d = 2;
  int n = 64;
  double period = 1.0;

  void validate() const {
    if (d < 1) throw InvalidGrid("dimension must be >= 1, got " + std::to_string(d));
    if (n < 8 || (n & (n - 1)) != 0)
      throw InvalidGrid("points per axis must be a power of two >= 8, got " + std::to_string(n));
    if (!(period > 0.0)) throw InvalidGrid("period must be positive");
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
  }

  double length() const { return 2.0 * std::numbers::pi * period; }
  double spacing() const { return length() / n; }
  double cell_volume() const { return std::pow(spacing(), d); }
  double volume() const { return std::pow(length(), d); }

  /// Largest wavenumber magnitude along one axis, n/(2P).
  double nyquist() const { return n / (2.0 * period); }

  /// Signed mode index for storage index i along one axis.
  int mode(int i) const { return i < n / 2 ? i : i - n; }

  /// Wavenumber for storage index i along one axis.
  double wavenumber(int i) const { return mode(i) / period; }

  double coordinate(int i) const { return -std::numbers::pi * period + i * spacing(); }

  /// Index of the last dyadic shell that can carry grid modes.
  int k_max() const {
    return static_cast<int>(std::ceil(std::log2(std::sqrt(static_cast<double>(d)) * nyquist()))) + 1;
  }

  /// Decomposes a flat index into per-axis indices.
  void unravel(std::size_t flat, std::vector<int>& idx) const {
    idx.resize(d);
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n);
      flat /= n;
    }
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.d == b.d && a.n == b.n && a.period == b.period;
  }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw GridMismatch(std::string(where) + ": operands live on different grids");
}

}  // namespace smap
