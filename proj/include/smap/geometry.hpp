#pragma once

#include <cmath>
#include <sstream>

#include "smap/spectral.hpp"

namespace smap {

/// Points with 1 + s3 at or below this value are treated as hitting the south pole.
inline constexpr double kChartGuard = 1e-6;

/// Stereographic chart at the north pole: g = (s1 + i s2) / (1 + s3).
template <typename Scalar>
ComplexField<Scalar> stereo_project(const SphereField<Scalar>& s, Scalar chart_guard = Scalar(kChartGuard)) {
  const auto& v = s.values();
  const RealValues<Scalar> denom = Scalar(1) + v.col(2);
  Eigen::Index worst = 0;
  const Scalar lowest = denom.minCoeff(&worst);
  if (!(lowest > chart_guard)) {
    std::ostringstream msg;
    msg << "1 + s3 = " << lowest << " at point " << worst << " (guard " << chart_guard << ")";
    throw ChartViolation(msg.str());
  }
  ComplexValues<Scalar> g(v.rows());
  g.real() = v.col(0) / denom;
  g.imag() = v.col(1) / denom;
  return ComplexField<Scalar>(s.grid(), std::move(g), Representation::physical, s.time());
}

/// Inverse chart: s = (2 Re g, 2 Im g, 1 - |g|^2) / (1 + |g|^2).
template <typename Scalar>
SphereField<Scalar> stereo_lift(const ComplexField<Scalar>& g) {
  if (!g.is_physical()) throw RepresentationMismatch("stereo_lift expects a physical-space field");
  const auto& u = g.values();
  const RealValues<Scalar> m = u.abs2();
  const RealValues<Scalar> inv = (Scalar(1) + m).inverse();
  Vector3Values<Scalar> s(u.size(), 3);
  s.col(0) = Scalar(2) * u.real() * inv;
  s.col(1) = Scalar(2) * u.imag() * inv;
  s.col(2) = (Scalar(1) - m) * inv;
  return SphereField<Scalar>(g.grid(), std::move(s), g.time());
}

/// Metric d^sigma(f, f') = [sum_l ||f_l - f'_l||^2_{H^sigma}]^{1/2}.
template <typename Scalar>
Scalar sobolev_distance(const SphereField<Scalar>& f, const SphereField<Scalar>& fp, Scalar sigma) {
  require_same_grid(f.grid(), fp.grid(), "sobolev_distance");
  Scalar total = 0;
  for (int l = 0; l < 3; ++l) {
    const RealValues<Scalar> diff = f.component(l) - fp.component(l);
    const Scalar c = sobolev_norm(complexify<Scalar>(f.grid(), diff), sigma);
    total += c * c;
  }
  return std::sqrt(total);
}

}  // namespace smap
