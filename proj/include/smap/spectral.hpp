#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "smap/fft.hpp"
#include "smap/fields.hpp"

namespace smap {

enum class Direction { forward, inverse };

// ---------------------------------------------------------------------------
// Cutoff family

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
template <typename Scalar>
Scalar smooth_step(Scalar x) {
  auto theta = [](Scalar y) { return y > Scalar(0) ? std::exp(-Scalar(1) / y) : Scalar(0); };
  if (x <= Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return Scalar(1);
  const Scalar a = theta(x);
  return a / (a + theta(Scalar(1) - x));
}

/// Radial bump: 1 on |r| <= 5/4, 0 on |r| >= 8/5.
template <typename Scalar>
Scalar eta0(Scalar r) {
  constexpr double inner = 5.0 / 4.0;
  constexpr double outer = 8.0 / 5.0;
  return Scalar(1) - smooth_step<Scalar>((std::abs(r) - Scalar(inner)) / Scalar(outer - inner));
}

/// Dyadic shell k of the Littlewood-Paley partition; supported in
/// (2^k * 5/8, 2^k * 8/5) for k >= 1.
template <typename Scalar>
Scalar eta_shell(int k, Scalar r) {
  if (k <= 0) return eta0(r);
  return eta0(std::ldexp(r, -k)) - eta0(std::ldexp(r, -(k - 1)));
}

/// chi_{k,l}(r): identically 1 for k <= 99, otherwise a smoothed indicator of
/// r >= 2^{k-l}.
template <typename Scalar>
Scalar chi(int k, int l, Scalar r) {
  if (k <= 99) return Scalar(1);
  if (r < Scalar(0)) return Scalar(0);
  return Scalar(1) - eta0(std::ldexp(r, -(k - l)));
}

/// Even time cutoff: 1 on [-5/4, 5/4], supported in [-8/5, 8/5].
template <typename Scalar>
Scalar psi(Scalar t) {
  return eta0(t);
}

// ---------------------------------------------------------------------------
// Wavenumber tables

/// Per-grid multiplier ingredients, computed once per thread and grid.
template <typename Scalar>
struct WaveTable {
  GridSpec grid;
  RealValues<Scalar> xi2;                  ///< |xi|^2 over all modes
  std::vector<RealValues<Scalar>> xi;      ///< xi_a with the Nyquist mode zeroed
  RealValues<Scalar> two_thirds_keep;      ///< 1 inside the 2/3 box, else 0

  explicit WaveTable(const GridSpec& g) : grid(g) {
    const auto size = static_cast<Eigen::Index>(g.size());
    xi2 = RealValues<Scalar>::Zero(size);
    xi.assign(g.d, RealValues<Scalar>::Zero(size));
    two_thirds_keep = RealValues<Scalar>::Ones(size);
    std::vector<int> idx;
    const double cut = (2.0 / 3.0) * g.nyquist();
    for (Eigen::Index f = 0; f < size; ++f) {
      g.unravel(static_cast<std::size_t>(f), idx);
      Scalar s = 0;
      for (int a = 0; a < g.d; ++a) {
        const double w = g.wavenumber(idx[a]);
        s += Scalar(w * w);
        xi[a](f) = g.mode(idx[a]) == -g.n / 2 ? Scalar(0) : Scalar(w);
        if (std::abs(w) >= cut) two_thirds_keep(f) = Scalar(0);
      }
      xi2(f) = s;
    }
  }
};

template <typename Scalar>
const WaveTable<Scalar>& wave_table(const GridSpec& grid) {
  thread_local std::vector<std::unique_ptr<WaveTable<Scalar>>> cache;
  for (const auto& t : cache)
    if (t->grid == grid) return *t;
  cache.push_back(std::make_unique<WaveTable<Scalar>>(grid));
  return *cache.back();
}

// ---------------------------------------------------------------------------
// Transforms

namespace detail {

template <typename Scalar>
void transform_in_place(ComplexValues<Scalar>& values, const GridSpec& grid, bool inverse) {
  std::vector<int> shape(grid.d, grid.n), axes(grid.d);
  for (int a = 0; a < grid.d; ++a) axes[a] = a;
  fft_axes<Scalar>(values.data(), shape, axes, inverse);
}

template <typename Scalar>
ComplexValues<Scalar> spectrum_of(const ComplexField<Scalar>& u) {
  ComplexValues<Scalar> v = u.values();
  if (u.is_physical()) transform_in_place(v, u.grid(), false);
  return v;
}

/// Returns spectrum `v` in the representation of `like`.
template <typename Scalar>
ComplexField<Scalar> from_spectrum(ComplexValues<Scalar> v, const ComplexField<Scalar>& like) {
  if (like.is_physical()) transform_in_place(v, like.grid(), true);
  return ComplexField<Scalar>(like.grid(), std::move(v), like.representation(), like.time());
}

}  // namespace detail

/// Unitary DFT; the direction must be opposite to the current representation.
template <typename Scalar>
ComplexField<Scalar> transform(const ComplexField<Scalar>& u, Direction direction) {
  const bool forward = direction == Direction::forward;
  if (forward != u.is_physical())
    throw RepresentationMismatch(forward ? "forward transform of a frequency-space field"
                                         : "inverse transform of a physical-space field");
  ComplexValues<Scalar> v = u.values();
  detail::transform_in_place(v, u.grid(), !forward);
  return ComplexField<Scalar>(u.grid(), std::move(v),
                              forward ? Representation::frequency : Representation::physical, u.time());
}

template <typename Scalar>
ComplexField<Scalar> to_frequency(const ComplexField<Scalar>& u) {
  return u.is_physical() ? transform(u, Direction::forward) : u;
}

template <typename Scalar>
ComplexField<Scalar> to_physical(const ComplexField<Scalar>& u) {
  return u.is_physical() ? u : transform(u, Direction::inverse);
}

// ---------------------------------------------------------------------------
// Multiplier operators. Each returns the representation it was given.

/// Littlewood-Paley projection Q_k: multiplies the spectrum by eta_k(|xi|).
template <typename Scalar>
ComplexField<Scalar> lp_project(const ComplexField<Scalar>& u, int k) {
  const auto& table = wave_table<Scalar>(u.grid());
  ComplexValues<Scalar> v = detail::spectrum_of(u);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= eta_shell<Scalar>(k, std::sqrt(table.xi2(i)));
  return detail::from_spectrum(std::move(v), u);
}

/// J^sigma: multiplies the spectrum by (1 + |xi|^2)^{sigma/2}. Negative sigma allowed.
template <typename Scalar>
ComplexField<Scalar> apply_jsigma(const ComplexField<Scalar>& u, Scalar sigma) {
  const auto& table = wave_table<Scalar>(u.grid());
  ComplexValues<Scalar> v = detail::spectrum_of(u);
  v *= (Scalar(1) + table.xi2).pow(sigma / Scalar(2)).template cast<std::complex<Scalar>>();
  return detail::from_spectrum(std::move(v), u);
}

/// Free Schrodinger group W(t): multiplies the spectrum by exp(-i t |xi|^2).
template <typename Scalar>
ComplexField<Scalar> free_propagate(const ComplexField<Scalar>& phi, Scalar t) {
  const auto& table = wave_table<Scalar>(phi.grid());
  ComplexValues<Scalar> v = detail::spectrum_of(phi);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= std::polar(Scalar(1), -t * table.xi2(i));
  ComplexField<Scalar> out = detail::from_spectrum(std::move(v), phi);
  out.set_time(phi.time() + t);
  return out;
}

/// d/dx_j for j in 1..d: multiplies the spectrum by i xi_j.
template <typename Scalar>
ComplexField<Scalar> gradient(const ComplexField<Scalar>& u, int j) {
  if (j < 1 || j > u.grid().d)
    throw AxisOutOfRange("axis " + std::to_string(j) + " outside 1.." + std::to_string(u.grid().d));
  const auto& table = wave_table<Scalar>(u.grid());
  ComplexValues<Scalar> v = detail::spectrum_of(u);
  v *= table.xi[j - 1].template cast<std::complex<Scalar>>() * std::complex<Scalar>(0, 1);
  return detail::from_spectrum(std::move(v), u);
}

/// Spectral Laplacian, multiplier -|xi|^2.
template <typename Scalar>
ComplexField<Scalar> laplacian(const ComplexField<Scalar>& u) {
  const auto& table = wave_table<Scalar>(u.grid());
  ComplexValues<Scalar> v = detail::spectrum_of(u);
  v *= (-table.xi2).template cast<std::complex<Scalar>>();
  return detail::from_spectrum(std::move(v), u);
}

/// ||u||_{H^sigma} = ||J^sigma u||_{L^2}.
template <typename Scalar>
Scalar sobolev_norm(const ComplexField<Scalar>& u, Scalar sigma) {
  const auto& table = wave_table<Scalar>(u.grid());
  const ComplexValues<Scalar> v = detail::spectrum_of(u);
  const Scalar s = ((Scalar(1) + table.xi2).pow(sigma) * v.abs2()).sum();
  return std::sqrt(s * static_cast<Scalar>(u.grid().cell_volume()));
}

/// Wraps a real component as a physical-space complex field.
template <typename Scalar, typename Derived>
ComplexField<Scalar> complexify(const GridSpec& grid, const Eigen::ArrayBase<Derived>& real, Scalar time = 0) {
  return ComplexField<Scalar>(grid, real.template cast<std::complex<Scalar>>(), Representation::physical, time);
}

}  // namespace smap
