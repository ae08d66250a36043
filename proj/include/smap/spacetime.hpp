#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "smap/trajectory.hpp"
#include "smap/spectral.hpp"

namespace smap {

// ---------------------------------------------------------------------------
// Space-time spectra

/// Windowed (d+1)-dimensional spectrum of a chart trajectory.
///
/// Samples live on t_i = -T_w + i*dt_w, i < M_t. The time transform is taken
/// of the profile exp(i t |xi|^2) u^(xi, t), so the stored time frequency is
/// tau' = tau + |xi|^2 (distance from the paraboloid) on the lattice
/// (pi/T_w) Z. Layout is time-major: values[i * grid.size() + f].
template <typename Scalar>
struct SpaceTimeSpectrum {
  GridSpec grid;
  Scalar window = Scalar(1);  ///< T_w
  int steps = 0;              ///< M_t
  ComplexValues<Scalar> values;

  Scalar dt() const { return Scalar(2) * window / static_cast<Scalar>(steps); }
  Scalar time(int i) const { return -window + static_cast<Scalar>(i) * dt(); }
  /// tau + |xi|^2 for time-frequency storage index l.
  Scalar offset(int l) const {
    const int m = l < steps / 2 ? l : l - steps;
    return static_cast<Scalar>(m) * std::numbers::pi_v<Scalar> / window;
  }
  std::size_t space_size() const { return grid.size(); }
  /// Riemann weight of one space-time cell.
  Scalar cell() const { return static_cast<Scalar>(grid.cell_volume()) * dt(); }
  Scalar l2_norm() const { return std::sqrt(values.abs2().sum() * cell()); }

  SpaceTimeSpectrum zero_like() const {
    SpaceTimeSpectrum out = *this;
    out.values.setZero();
    return out;
  }
};

/// Physical space-time samples u(x, t_i), time-major like SpaceTimeSpectrum.
template <typename Scalar>
struct SpaceTimeSamples {
  GridSpec grid;
  Scalar t0 = Scalar(0);
  Scalar dt = Scalar(1);
  int steps = 0;
  ComplexValues<Scalar> values;

  Scalar time(int i) const { return t0 + static_cast<Scalar>(i) * dt; }
  auto slice(int i) const {
    const auto s = static_cast<Eigen::Index>(grid.size());
    return values.segment(static_cast<Eigen::Index>(i) * s, s);
  }
};

/// Time window: psi(8/5 * t / T_w), equal to 1 for |t| <= (25/32) T_w and
/// vanishing for |t| >= T_w.
template <typename Scalar>
Scalar time_window(Scalar t, Scalar window) {
  return psi(Scalar(1.6) * t / window);
}

namespace detail {

template <typename Scalar>
void time_fft(ComplexValues<Scalar>& values, const GridSpec& grid, int steps, bool inverse) {
  const std::array<int, 2> shape{steps, static_cast<int>(grid.size())};
  const std::array<int, 1> axes{0};
  fft_axes<Scalar>(values.data(), shape, axes, inverse);
}

}  // namespace detail

/// Windows a trajectory to [-T_w, T_w] and transforms in space and time.
///
/// Outside the solved interval the trajectory is continued by free evolution,
/// i.e. its profile exp(i t |xi|^2) u^ is held constant; between stored times
/// the profile is interpolated linearly.
template <typename Scalar>
SpaceTimeSpectrum<Scalar> spacetime_transform(const ChartTrajectory<Scalar>& traj, Scalar window = Scalar(1),
                                              int steps = 64) {
  if (steps < 16) throw WindowTooShort("need at least 16 time samples, got " + std::to_string(steps));
  if (traj.empty()) throw std::invalid_argument("spacetime_transform: empty trajectory");
  if (!(window > Scalar(0))) throw std::invalid_argument("spacetime_transform: window must be positive");
  const GridSpec& grid = traj.grid();
  const auto& table = wave_table<Scalar>(grid);
  const auto size = static_cast<Eigen::Index>(grid.size());

  std::vector<ComplexValues<Scalar>> profiles;
  profiles.reserve(static_cast<std::size_t>(traj.size()));
  for (int m = 0; m < traj.size(); ++m) {
    ComplexValues<Scalar> v = detail::spectrum_of(traj[m]);
    const Scalar t = traj.time(m);
    for (Eigen::Index f = 0; f < size; ++f) v(f) *= std::polar(Scalar(1), t * table.xi2(f));
    profiles.push_back(std::move(v));
  }

  SpaceTimeSpectrum<Scalar> out{grid, window, steps, ComplexValues<Scalar>::Zero(size * steps)};
  for (int i = 0; i < steps; ++i) {
    const Scalar t = out.time(i);
    const Scalar w = time_window(t, window);
    if (w == Scalar(0)) continue;
    const Scalar pos = std::clamp((t - traj.t0()) / traj.dt(), Scalar(0), static_cast<Scalar>(traj.size() - 1));
    const int lo = std::min(static_cast<int>(std::floor(pos)), traj.size() - 1);
    const int hi = std::min(lo + 1, traj.size() - 1);
    const Scalar frac = pos - static_cast<Scalar>(lo);
    auto seg = out.values.segment(static_cast<Eigen::Index>(i) * size, size);
    if (hi == lo || frac == Scalar(0))
      seg = w * profiles[lo];
    else
      seg = w * ((Scalar(1) - frac) * profiles[lo] + frac * profiles[hi]);
  }
  detail::time_fft(out.values, grid, steps, false);
  return out;
}

/// Space-time spectrum of ready-made samples on [-T_w, T_w) (no window, no
/// extension). The sample times must be the spectrum's own time grid.
template <typename Scalar>
SpaceTimeSpectrum<Scalar> spectrum_from_samples(const SpaceTimeSamples<Scalar>& s) {
  const auto& table = wave_table<Scalar>(s.grid);
  const auto size = static_cast<Eigen::Index>(s.grid.size());
  SpaceTimeSpectrum<Scalar> out{s.grid, static_cast<Scalar>(s.steps) * s.dt / Scalar(2), s.steps, s.values};
  for (int i = 0; i < s.steps; ++i) {
    ComplexValues<Scalar> v = out.values.segment(static_cast<Eigen::Index>(i) * size, size);
    detail::transform_in_place(v, s.grid, false);
    const Scalar t = s.time(i);
    for (Eigen::Index f = 0; f < size; ++f) v(f) *= std::polar(Scalar(1), t * table.xi2(f));
    out.values.segment(static_cast<Eigen::Index>(i) * size, size) = v;
  }
  detail::time_fft(out.values, s.grid, s.steps, false);
  return out;
}

/// Inverse of spacetime_transform on the window's time grid.
template <typename Scalar>
SpaceTimeSamples<Scalar> to_samples(const SpaceTimeSpectrum<Scalar>& F) {
  const auto& table = wave_table<Scalar>(F.grid);
  const auto size = static_cast<Eigen::Index>(F.grid.size());
  SpaceTimeSamples<Scalar> out{F.grid, -F.window, F.dt(), F.steps, F.values};
  detail::time_fft(out.values, F.grid, F.steps, true);
  ComplexValues<Scalar> v;
  for (int i = 0; i < F.steps; ++i) {
    v = out.values.segment(static_cast<Eigen::Index>(i) * size, size);
    const Scalar t = F.time(i);
    for (Eigen::Index f = 0; f < size; ++f) v(f) *= std::polar(Scalar(1), -t * table.xi2(f));
    detail::transform_in_place(v, F.grid, true);
    out.values.segment(static_cast<Eigen::Index>(i) * size, size) = v;
  }
  return out;
}

/// Multiplies F by m(xi, tau') pointwise.
template <typename Scalar, typename Fn>
SpaceTimeSpectrum<Scalar> apply_multiplier(const SpaceTimeSpectrum<Scalar>& F, Fn&& m) {
  SpaceTimeSpectrum<Scalar> out = F;
  const auto size = static_cast<Eigen::Index>(F.grid.size());
  for (int l = 0; l < F.steps; ++l) {
    const Scalar tau = F.offset(l);
    for (Eigen::Index f = 0; f < size; ++f) out.values(l * size + f) *= m(f, tau);
  }
  return out;
}

/// Multiplies F by a purely spatial multiplier m(xi), one entry per mode.
template <typename Scalar>
SpaceTimeSpectrum<Scalar> apply_space_multiplier(const SpaceTimeSpectrum<Scalar>& F, const RealValues<Scalar>& m) {
  SpaceTimeSpectrum<Scalar> out = F;
  const auto size = static_cast<Eigen::Index>(F.grid.size());
  for (int l = 0; l < F.steps; ++l) out.values.segment(l * size, size) *= m.template cast<std::complex<Scalar>>();
  return out;
}

/// Multiplies F by m(tau'), evaluated once per time frequency.
template <typename Scalar, typename Fn>
SpaceTimeSpectrum<Scalar> apply_time_multiplier(const SpaceTimeSpectrum<Scalar>& F, Fn&& m) {
  SpaceTimeSpectrum<Scalar> out = F;
  const auto size = static_cast<Eigen::Index>(F.grid.size());
  for (int l = 0; l < F.steps; ++l) out.values.segment(l * size, size) *= m(F.offset(l));
  return out;
}

/// Sharp shell indicator: |xi| in [2^{k-1}, 2^{k+1}], or |xi| <= 2 for k = 0.
template <typename Scalar>
bool in_shell(int k, Scalar r) {
  if (k <= 0) return r <= Scalar(2);
  return r >= std::ldexp(Scalar(1), k - 1) && r <= std::ldexp(Scalar(1), k + 1);
}

template <typename Scalar>
RealValues<Scalar> shell_indicator(const GridSpec& grid, int k) {
  const auto& table = wave_table<Scalar>(grid);
  return table.xi2.unaryExpr([k](Scalar x2) { return Scalar(in_shell(k, std::sqrt(x2))); });
}

/// Restriction to D_{k,j} = {xi in shell k, |tau + |xi|^2| <= 2^{j+1}}; j < 0 means no tau limit.
template <typename Scalar>
SpaceTimeSpectrum<Scalar> mask_region(const SpaceTimeSpectrum<Scalar>& F, int k, int j = -1) {
  const Scalar tau_cap = j < 0 ? std::numeric_limits<Scalar>::infinity() : std::ldexp(Scalar(1), j + 1);
  return apply_time_multiplier(apply_space_multiplier(F, shell_indicator<Scalar>(F.grid, k)),
                               [&](Scalar tau) { return Scalar(std::abs(tau) <= tau_cap); });
}

/// eta_k(|xi|) F.
template <typename Scalar>
SpaceTimeSpectrum<Scalar> shell_project(const SpaceTimeSpectrum<Scalar>& F, int k) {
  const auto& table = wave_table<Scalar>(F.grid);
  const RealValues<Scalar> m = table.xi2.unaryExpr([k](Scalar x2) { return eta_shell<Scalar>(k, std::sqrt(x2)); });
  return apply_space_multiplier(F, m);
}

/// Largest modulation index j whose eta_j can see the stored tau' range.
template <typename Scalar>
int modulation_levels(const SpaceTimeSpectrum<Scalar>& F) {
  const Scalar top = static_cast<Scalar>(F.steps / 2) * std::numbers::pi_v<Scalar> / F.window;
  int j = 0;
  while (std::ldexp(Scalar(5.0 / 8.0), j + 1) < top) ++j;
  return j;
}

/// X_k norm: sum_j 2^{j/2} || eta_j(tau + |xi|^2) F 1_{shell k} ||_{L^2}, with
/// j running up to the grid's tau range.
template <typename Scalar>
Scalar xk_norm(const SpaceTimeSpectrum<Scalar>& F, int k) {
  const auto size = static_cast<Eigen::Index>(F.grid.size());
  const RealValues<Scalar> shell = shell_indicator<Scalar>(F.grid, k);
  const int levels = modulation_levels(F);
  std::vector<Scalar> mass(static_cast<std::size_t>(levels) + 1, Scalar(0));
  for (int l = 0; l < F.steps; ++l) {
    const Scalar row = (F.values.segment(l * size, size).abs2() * shell).sum();
    if (row == Scalar(0)) continue;
    const Scalar tau = std::abs(F.offset(l));
    for (int j = 0; j <= levels; ++j) {
      const Scalar e = eta_shell<Scalar>(j, tau);
      mass[j] += e * e * row;
    }
  }
  Scalar total = 0;
  for (int j = 0; j <= levels; ++j) total += std::sqrt(std::ldexp(Scalar(1), j) * mass[j] * F.cell());
  return total;
}

/// Upper bound for the F^sigma norm: [sum_k 2^{2 sigma k} X_k(eta_k F)^2]^{1/2}.
template <typename Scalar>
Scalar fsigma_upper(const SpaceTimeSpectrum<Scalar>& F, Scalar sigma) {
  Scalar total = 0;
  for (int k = 0; k <= F.grid.k_max(); ++k) {
    const Scalar x = xk_norm(shell_project(F, k), k);
    total += std::pow(Scalar(2), Scalar(2) * sigma * k) * x * x;
  }
  return std::sqrt(total);
}

/// Upper bound for the N^sigma norm: fsigma_upper of (tau + |xi|^2 + i)^{-1} F.
template <typename Scalar>
Scalar nsigma_upper(const SpaceTimeSpectrum<Scalar>& F, Scalar sigma) {
  using Complex = std::complex<Scalar>;
  const SpaceTimeSpectrum<Scalar> G = apply_multiplier(F, [](Eigen::Index, Scalar tau) {
    return Scalar(1) / Complex(tau, Scalar(1));
  });
  return fsigma_upper(G, sigma);
}

// ---------------------------------------------------------------------------
// Mixed norms along lattice directions

/// Unit directions closed under negation.
struct DirectionSet {
  std::vector<std::vector<double>> directions;

  /// Coordinate axes and normalized face diagonals, each with both signs.
  static DirectionSet lattice(int d) {
    DirectionSet out;
    auto add = [&](std::vector<double> e) {
      out.directions.push_back(e);
      for (auto& c : e) c = -c;
      out.directions.push_back(std::move(e));
    };
    for (int a = 0; a < d; ++a) {
      std::vector<double> e(d, 0.0);
      e[a] = 1.0;
      add(e);
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        for (double s : {1.0, -1.0}) {
          std::vector<double> e(d, 0.0);
          e[a] = r;
          e[b] = s * r;
          add(e);
        }
    return out;
  }
};

inline std::string direction_label(const std::vector<double>& e) {
  std::ostringstream s;
  s << '(';
  for (std::size_t a = 0; a < e.size(); ++a) {
    if (a) s << ' ';
    const double c = e[a];
    if (c == 0.0)
      s << '0';
    else if (std::abs(std::abs(c) - 1.0) < 1e-12)
      s << (c > 0 ? "+1" : "-1");
    else
      s << (c > 0 ? "+r" : "-r");
  }
  s << ')';
  return s.str();
}

namespace detail {

/// Fibration of the grid by hyperplanes orthogonal to a lattice direction.
struct Fibration {
  int a = 0, b = -1;  ///< axes involved; b < 0 for coordinate axes
  int sa = 1, sb = 1;
  double dr = 0;      ///< offset between neighbouring fibers
};

inline Fibration fibration(const GridSpec& grid, const std::vector<double>& e) {
  if (static_cast<int>(e.size()) != grid.d) throw UnsupportedDirection("direction has wrong dimension");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<int> nonzero;
  for (int a = 0; a < grid.d; ++a)
    if (std::abs(e[a]) > 1e-12) nonzero.push_back(a);
  Fibration fib;
  auto bad = [&] { return UnsupportedDirection("direction " + direction_label(e) + " is not a lattice direction"); };
  if (nonzero.size() == 1) {
    if (std::abs(std::abs(e[nonzero[0]]) - 1.0) > 1e-12) throw bad();
    fib.a = nonzero[0];
    fib.sa = e[fib.a] > 0 ? 1 : -1;
    fib.dr = grid.spacing();
  } else if (nonzero.size() == 2) {
    for (int a : nonzero)
      if (std::abs(std::abs(e[a]) - r) > 1e-12) throw bad();
    fib.a = nonzero[0];
    fib.b = nonzero[1];
    fib.sa = e[fib.a] > 0 ? 1 : -1;
    fib.sb = e[fib.b] > 0 ? 1 : -1;
    fib.dr = grid.spacing() * r;
  } else {
    throw bad();
  }
  return fib;
}

}  // namespace detail

/// Discrete L^{p,q}_e norm: L^q over each hyperplane fiber x time, then L^p
/// over the fiber offsets r along e. p in {1, 2, inf}, q in {2, inf}; pass
/// infinity() for the sup norms.
template <typename Scalar>
Scalar lpq_norm(const SpaceTimeSamples<Scalar>& s, const std::vector<double>& e, double p, double q) {
  const bool q_inf = std::isinf(q), p_inf = std::isinf(p);
  if (!(q_inf || q == 2.0)) throw std::invalid_argument("lpq_norm: q must be 2 or infinity");
  if (!(p_inf || p == 1.0 || p == 2.0)) throw std::invalid_argument("lpq_norm: p must be 1, 2 or infinity");
  const GridSpec& grid = s.grid;
  const auto fib = detail::fibration(grid, e);
  const int n = grid.n;
  const std::size_t size = grid.size();

  std::vector<int> cls(size);
  std::vector<int> idx;
  for (std::size_t f = 0; f < size; ++f) {
    grid.unravel(f, idx);
    int c = fib.sa * idx[fib.a];
    if (fib.b >= 0) c += fib.sb * idx[fib.b];
    cls[f] = ((c % n) + n) % n;
  }

  std::vector<Scalar> inner(static_cast<std::size_t>(n), Scalar(0));
  for (int i = 0; i < s.steps; ++i) {
    const auto slice = s.slice(i);
    for (std::size_t f = 0; f < size; ++f) {
      const Scalar a = std::norm(slice(static_cast<Eigen::Index>(f)));
      Scalar& acc = inner[static_cast<std::size_t>(cls[f])];
      acc = q_inf ? std::max(acc, a) : acc + a;
    }
  }
  const Scalar weight = static_cast<Scalar>(grid.cell_volume() / fib.dr) * s.dt;
  Scalar outer = 0;
  for (Scalar v : inner) {
    const Scalar g = q_inf ? std::sqrt(v) : std::sqrt(v * weight);
    if (p_inf)
      outer = std::max(outer, g);
    else if (p == 1.0)
      outer += static_cast<Scalar>(fib.dr) * g;
    else
      outer += static_cast<Scalar>(fib.dr) * g * g;
  }
  return p == 2.0 ? std::sqrt(outer) : outer;
}

/// Length of the fiber-offset range along e (n fibers of width dr).
inline double fiber_extent(const GridSpec& grid, const std::vector<double>& e) {
  return grid.n * detail::fibration(grid, e).dr;
}

// ---------------------------------------------------------------------------
// Lemma ratio diagnostics

struct NormRow {
  std::string trajectory_id;
  int k = 0;
  std::string quantity;   ///< Xk, R1, R2, R3, R4, Fsigma, ...
  std::string direction;  ///< empty when not direction dependent
  double value = 0;
};

struct NormReport {
  std::vector<NormRow> rows;
  std::vector<std::string> flags;  ///< skipped members / shells
};

struct LemmaMaxima {
  std::vector<int> shells;
  std::vector<double> r1, r2, r3, r4;  ///< per-shell maxima over the ensemble
};

struct LemmaResult {
  NormReport report;
  LemmaMaxima maxima;
};

/// Least-squares slope of log2(values) against ks; non-positive values are dropped.
inline double log2_slope(const std::vector<int>& ks, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i])) continue;
    const double x = ks[i], y = std::log2(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Ratio statistics of the local smoothing, maximal function and energy
/// estimates against X_k, per ensemble member and shell k in [k_lo, k_hi].
///
///   R2 = 2^{k/2} ||F^{-1}[f chi_{k,30}(xi.e)]||_{L^{inf,2}_e} / X_k
///   R3 = 2^{-(d-1)k/2} (k+1)^{-2} ||1_{[-2,2]}(t) F^{-1} f||_{L^{2,inf}_e} / X_k
///   R4 = sup_t ||F^{-1} f(., t)||_{L^2} / X_k
///   R1 = max_j X_k(f eta_j(tau + |xi|^2)) / X_k   (at most 1)
///
/// with f = eta_k(xi) F. Members with no mass are skipped with a flag, as are
/// shells carrying less than `shell_floor` of the member's L^2 mass.
template <typename Scalar>
LemmaResult lemma_diagnostics(const std::vector<SpaceTimeSpectrum<Scalar>>& ensemble,
                              const std::vector<std::string>& ids, const DirectionSet& directions, int k_lo,
                              int k_hi, double shell_floor = 1e-10) {
  if (ensemble.empty()) throw EmptyEnsemble("lemma_diagnostics needs at least one trajectory");
  if (directions.directions.empty()) throw EmptyEnsemble("lemma_diagnostics needs at least one direction");
  const double inf = std::numeric_limits<double>::infinity();
  LemmaResult out;
  for (int k = k_lo; k <= k_hi; ++k) {
    out.maxima.shells.push_back(k);
    for (auto* v : {&out.maxima.r1, &out.maxima.r2, &out.maxima.r3, &out.maxima.r4})
      v->push_back(std::numeric_limits<double>::quiet_NaN());
  }
  auto bump = [](double& slot, double v) {
    if (std::isnan(slot) || v > slot) slot = v;
  };

  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const auto& F = ensemble[m];
    const std::string id = m < ids.size() ? ids[m] : std::to_string(m);
    const double total = static_cast<double>(F.l2_norm());
    if (total == 0.0) {
      out.report.flags.push_back(id + ": zero member skipped");
      continue;
    }
    const int d = F.grid.d;
    for (int k = k_lo; k <= k_hi; ++k) {
      const std::size_t slot = static_cast<std::size_t>(k - k_lo);
      const auto f = shell_project(F, k);
      const double mass = static_cast<double>(f.l2_norm());
      if (mass < shell_floor * total) {
        out.report.flags.push_back(id + ": shell " + std::to_string(k) + " empty, skipped");
        continue;
      }
      const double xk = static_cast<double>(xk_norm(f, k));
      out.report.rows.push_back({id, k, "Xk", "", xk});

      double r1 = 0;
      for (int j = 0; j <= modulation_levels(f); ++j) {
        const auto fj = apply_time_multiplier(f, [&](Scalar tau) { return eta_shell<Scalar>(j, tau); });
        r1 = std::max(r1, static_cast<double>(xk_norm(fj, k)) / xk);
      }
      out.report.rows.push_back({id, k, "R1", "", r1});
      bump(out.maxima.r1[slot], r1);

      const auto samples = to_samples(f);
      double sup_l2 = 0;
      for (int i = 0; i < samples.steps; ++i)
        sup_l2 = std::max(sup_l2, std::sqrt(static_cast<double>(samples.slice(i).abs2().sum()) *
                                            samples.grid.cell_volume()));
      const double r4 = sup_l2 / xk;
      out.report.rows.push_back({id, k, "R4", "", r4});
      bump(out.maxima.r4[slot], r4);

      for (const auto& e : directions.directions) {
        const std::string label = direction_label(e);
        RealValues<Scalar> cut(static_cast<Eigen::Index>(F.grid.size()));
        std::vector<int> pos;
        for (Eigen::Index idx = 0; idx < cut.size(); ++idx) {
          F.grid.unravel(static_cast<std::size_t>(idx), pos);
          Scalar proj = 0;
          for (int a = 0; a < d; ++a) proj += static_cast<Scalar>(F.grid.wavenumber(pos[a]) * e[a]);
          cut(idx) = chi<Scalar>(k, 30, proj);
        }
        const auto smoothed = (cut == Scalar(1)).all() ? samples : to_samples(apply_space_multiplier(f, cut));
        const double r2 = std::pow(2.0, k / 2.0) *
                          static_cast<double>(lpq_norm(smoothed, e, inf, 2.0)) / xk;
        out.report.rows.push_back({id, k, "R2", label, r2});
        bump(out.maxima.r2[slot], r2);

        SpaceTimeSamples<Scalar> local = samples;
        const auto space = static_cast<Eigen::Index>(local.grid.size());
        for (int i = 0; i < local.steps; ++i)
          if (std::abs(local.time(i)) > Scalar(2)) local.values.segment(i * space, space).setZero();
        const double r3 = std::pow(2.0, -(d - 1) * k / 2.0) / ((k + 1.0) * (k + 1.0)) *
                          static_cast<double>(lpq_norm(local, e, 2.0, inf)) / xk;
        out.report.rows.push_back({id, k, "R3", label, r3});
        bump(out.maxima.r3[slot], r3);
      }
    }
  }
  return out;
}

}  // namespace smap
