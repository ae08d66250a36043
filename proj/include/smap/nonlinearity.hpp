#pragma once

#include <complex>

#include "smap/spectral.hpp"

namespace smap {

struct DealiasPolicy {
  enum class Rule { two_thirds, none };
  Rule rule = Rule::two_thirds;

  static DealiasPolicy none() { return {Rule::none}; }
};

namespace detail {

template <typename Scalar>
void dealias_spectrum(ComplexValues<Scalar>& spectrum, const GridSpec& grid, DealiasPolicy policy) {
  if (policy.rule == DealiasPolicy::Rule::two_thirds)
    spectrum *= wave_table<Scalar>(grid).two_thirds_keep.template cast<std::complex<Scalar>>();
}

/// 2 conj(u) / (1 + |u|^2), pointwise on physical samples.
template <typename Scalar>
ComplexValues<Scalar> n_zero_pointwise(const ComplexValues<Scalar>& u) {
  return Scalar(2) * u.conjugate() / (Scalar(1) + u.abs2()).template cast<std::complex<Scalar>>();
}

/// Spectrum of N_0(u) sum_j (d_j u)^2 from physical samples of u.
template <typename Scalar>
ComplexValues<Scalar> nonlinearity_spectrum(const ComplexValues<Scalar>& u, const GridSpec& grid,
                                            DealiasPolicy policy) {
  const auto& table = wave_table<Scalar>(grid);
  ComplexValues<Scalar> spectrum = u;
  transform_in_place(spectrum, grid, false);
  ComplexValues<Scalar> grad_sq = ComplexValues<Scalar>::Zero(u.size());
  ComplexValues<Scalar> work;
  for (int a = 0; a < grid.d; ++a) {
    work = spectrum * table.xi[a].template cast<std::complex<Scalar>>() * std::complex<Scalar>(0, 1);
    transform_in_place(work, grid, true);
    grad_sq += work.square();
  }
  ComplexValues<Scalar> out = n_zero_pointwise(u) * grad_sq;
  transform_in_place(out, grid, false);
  dealias_spectrum(out, grid, policy);
  return out;
}

}  // namespace detail

/// N_0(u) = 2 conj(u) (1 + |u|^2)^{-1}, dealiased per policy.
template <typename Scalar>
ComplexField<Scalar> n_zero(const ComplexField<Scalar>& u, DealiasPolicy policy = {}) {
  if (!u.is_physical()) throw RepresentationMismatch("n_zero expects a physical-space field");
  ComplexValues<Scalar> v = detail::n_zero_pointwise(u.values());
  if (policy.rule != DealiasPolicy::Rule::none) {
    detail::transform_in_place(v, u.grid(), false);
    detail::dealias_spectrum(v, u.grid(), policy);
    detail::transform_in_place(v, u.grid(), true);
  }
  return ComplexField<Scalar>(u.grid(), std::move(v), Representation::physical, u.time());
}

/// Spatial right-hand side of the chart equation,
/// 2 conj(u) (1 + |u|^2)^{-1} sum_j (d_j u)^2, dealiased per policy.
template <typename Scalar>
ComplexField<Scalar> nonlinearity(const ComplexField<Scalar>& u, DealiasPolicy policy = {}) {
  if (!u.is_physical()) throw RepresentationMismatch("nonlinearity expects a physical-space field");
  ComplexValues<Scalar> v = detail::nonlinearity_spectrum(u.values(), u.grid(), policy);
  detail::transform_in_place(v, u.grid(), true);
  return ComplexField<Scalar>(u.grid(), std::move(v), Representation::physical, u.time());
}

namespace detail {

/// Spectral Laplacian of each column of a 3-component real field.
template <typename Scalar>
Vector3Values<Scalar> laplacian3(const Vector3Values<Scalar>& s, const GridSpec& grid) {
  const auto& table = wave_table<Scalar>(grid);
  Vector3Values<Scalar> out(s.rows(), 3);
  ComplexValues<Scalar> work;
  for (int l = 0; l < 3; ++l) {
    work = s.col(l).template cast<std::complex<Scalar>>();
    transform_in_place(work, grid, false);
    work *= (-table.xi2).template cast<std::complex<Scalar>>();
    transform_in_place(work, grid, true);
    out.col(l) = work.real();
  }
  return out;
}

template <typename Scalar>
Vector3Values<Scalar> cross(const Vector3Values<Scalar>& a, const Vector3Values<Scalar>& b) {
  Vector3Values<Scalar> c(a.rows(), 3);
  c.col(0) = a.col(1) * b.col(2) - a.col(2) * b.col(1);
  c.col(1) = a.col(2) * b.col(0) - a.col(0) * b.col(2);
  c.col(2) = a.col(0) * b.col(1) - a.col(1) * b.col(0);
  return c;
}

}  // namespace detail

/// s x Delta s with a spectral Laplacian; tangent to the sphere pointwise.
template <typename Scalar>
Vector3Values<Scalar> cross_rhs(const SphereField<Scalar>& s) {
  return detail::cross(s.values(), detail::laplacian3(s.values(), s.grid()));
}

}  // namespace smap
