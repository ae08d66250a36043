#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smap/geometry.hpp"
#include "smap/nonlinearity.hpp"
#include "smap/trajectory.hpp"

namespace smap {

// ---------------------------------------------------------------------------
// Picard / Duhamel construction on the chart

struct PicardRecord {
  int n = 0;
  double norm = 0;   ///< sup_t ||u_n||_{H^sigma0}
  double delta = 0;  ///< sup_t ||u_n - u_{n-1}||_{H^sigma0}
  double ratio = 0;  ///< delta_n / delta_{n-1}, with u_{-1} = 0
};

struct PicardHistory {
  double data_norm = 0;  ///< ||phi||_{H^sigma0}
  std::vector<PicardRecord> records;
};

template <typename Scalar>
struct PicardSettings {
  Scalar sigma0 = Scalar(1.6);
  Scalar dt = Scalar(1.0 / 256.0);
  DealiasPolicy dealias{};
};

/// Number of steps of size dt covering [0, T]; dt must divide T.
template <typename Scalar>
int step_count(Scalar T, Scalar dt) {
  if (!(dt > Scalar(0)) || !(T >= Scalar(0))) throw std::invalid_argument("need T >= 0 and dt > 0");
  const Scalar steps = std::round(T / dt);
  if (std::abs(steps * dt - T) > Scalar(1e-12) * std::max(Scalar(1), T))
    throw std::invalid_argument("time step does not divide the horizon");
  return static_cast<int>(steps);
}

namespace detail {

template <typename Scalar>
using Spectra = std::vector<ComplexValues<Scalar>>;

template <typename Scalar>
Spectra<Scalar> free_spectra(const ComplexValues<Scalar>& phi_hat, const GridSpec& grid, Scalar dt, int steps) {
  const auto& table = wave_table<Scalar>(grid);
  ComplexValues<Scalar> step(phi_hat.size());
  for (Eigen::Index i = 0; i < step.size(); ++i) step(i) = std::polar(Scalar(1), -dt * table.xi2(i));
  Spectra<Scalar> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(phi_hat);
  for (int m = 1; m <= steps; ++m) out.push_back(out.back() * step);
  return out;
}

/// Duhamel map on spectra: u_m = W(t_m) phi - i * trapezoid_m[W(t_m - s) N(prev(s))].
/// The trapezoid sum is accumulated as S_m = W(dt)(S_{m-1} + dt/2 N_{m-1}) + dt/2 N_m,
/// which reproduces the composite rule with exact propagator weights.
template <typename Scalar>
Spectra<Scalar> duhamel_spectra(const Spectra<Scalar>& free, const Spectra<Scalar>& prev, const GridSpec& grid,
                                Scalar dt, DealiasPolicy policy) {
  const auto& table = wave_table<Scalar>(grid);
  const auto size = static_cast<Eigen::Index>(grid.size());
  ComplexValues<Scalar> step(size);
  for (Eigen::Index i = 0; i < size; ++i) step(i) = std::polar(Scalar(1), -dt * table.xi2(i));
  const std::complex<Scalar> weight(0, -dt / Scalar(2));

  Spectra<Scalar> out;
  out.reserve(prev.size());
  ComplexValues<Scalar> accum = ComplexValues<Scalar>::Zero(size);
  ComplexValues<Scalar> last_n, physical;
  for (std::size_t m = 0; m < prev.size(); ++m) {
    physical = prev[m];
    transform_in_place(physical, grid, true);
    ComplexValues<Scalar> n_hat = nonlinearity_spectrum(physical, grid, policy);
    if (m == 0)
      accum.setZero();
    else
      accum = step * (accum + weight * last_n) + weight * n_hat;
    out.push_back(free[m] + accum);
    last_n = std::move(n_hat);
  }
  return out;
}

template <typename Scalar>
Scalar sobolev_norm_spectrum(const ComplexValues<Scalar>& v, const GridSpec& grid, Scalar sigma) {
  const auto& table = wave_table<Scalar>(grid);
  return std::sqrt(((Scalar(1) + table.xi2).pow(sigma) * v.abs2()).sum() * Scalar(grid.cell_volume()));
}

template <typename Scalar>
Spectra<Scalar> spectra_of(const ChartTrajectory<Scalar>& traj) {
  Spectra<Scalar> out;
  out.reserve(static_cast<std::size_t>(traj.size()));
  for (const auto& f : traj) out.push_back(spectrum_of(f));
  return out;
}

template <typename Scalar>
ChartTrajectory<Scalar> trajectory_from_spectra(const Spectra<Scalar>& spectra, const GridSpec& grid, Scalar dt) {
  ChartTrajectory<Scalar> traj(grid, dt);
  for (std::size_t m = 0; m < spectra.size(); ++m) {
    ComplexValues<Scalar> v = spectra[m];
    transform_in_place(v, grid, true);
    traj.push_back(ComplexField<Scalar>(grid, std::move(v), Representation::physical,
                                        static_cast<Scalar>(m) * dt));
  }
  return traj;
}

}  // namespace detail

/// One Picard step: t_m -> W(t_m) phi - i int_0^{t_m} W(t_m - s) N(prev(s)) ds,
/// with the integral evaluated by the composite trapezoid rule on prev's time grid.
template <typename Scalar>
ChartTrajectory<Scalar> duhamel_map(const ComplexField<Scalar>& phi, const ChartTrajectory<Scalar>& prev,
                                    DealiasPolicy policy = {}) {
  require_same_grid(phi.grid(), prev.grid(), "duhamel_map");
  if (prev.empty()) throw std::invalid_argument("duhamel_map: empty trajectory");
  if (std::abs(prev.t0()) > Scalar(0)) throw std::invalid_argument("duhamel_map: trajectory must start at t=0");
  const GridSpec& grid = phi.grid();
  const auto free = detail::free_spectra(detail::spectrum_of(phi), grid, prev.dt(), prev.size() - 1);
  const auto out = detail::duhamel_spectra(free, detail::spectra_of(prev), grid, prev.dt(), policy);
  return detail::trajectory_from_spectra(out, grid, prev.dt());
}

/// Iterates the Duhamel map from u_0 = W(t) phi until
/// sup_m ||u_n(t_m) - u_{n-1}(t_m)||_{H^sigma0} < tol * ||phi||_{H^sigma0}.
///
/// Throws NoContraction when the consecutive-difference ratio exceeds 0.95 three
/// times in a row (or stops being finite), and MaxIterExceeded otherwise.
template <typename Scalar>
std::pair<ChartTrajectory<Scalar>, PicardHistory> picard_solve(const ComplexField<Scalar>& phi, Scalar T,
                                                               Scalar tol, int max_iter,
                                                               const PicardSettings<Scalar>& settings = {}) {
  if (T > Scalar(1) + Scalar(1e-12)) throw std::invalid_argument("picard_solve: horizon must satisfy T <= 1");
  const int steps = step_count(T, settings.dt);
  const GridSpec& grid = phi.grid();
  const Scalar sigma = settings.sigma0;

  const ComplexValues<Scalar> phi_hat = detail::spectrum_of(phi);
  PicardHistory history;
  history.data_norm = static_cast<double>(detail::sobolev_norm_spectrum(phi_hat, grid, sigma));

  const auto free = detail::free_spectra(phi_hat, grid, settings.dt, steps);
  if (history.data_norm == 0.0) return {detail::trajectory_from_spectra(free, grid, settings.dt), history};
  auto current = free;

  auto sup_norm = [&](const detail::Spectra<Scalar>& s) {
    Scalar best = 0;
    for (const auto& v : s) best = std::max(best, detail::sobolev_norm_spectrum(v, grid, sigma));
    return best;
  };

  Scalar previous_delta = sup_norm(current);
  int slow = 0;
  for (int n = 1; n <= max_iter; ++n) {
    auto next = detail::duhamel_spectra(free, current, grid, settings.dt, settings.dealias);

    Scalar delta = 0;
    for (std::size_t m = 0; m < next.size(); ++m)
      delta = std::max(delta, detail::sobolev_norm_spectrum<Scalar>(next[m] - current[m], grid, sigma));
    const Scalar ratio = delta / previous_delta;
    history.records.push_back({n, static_cast<double>(sup_norm(next)), static_cast<double>(delta),
                               static_cast<double>(ratio)});
    current = std::move(next);

    if (!std::isfinite(static_cast<double>(delta))) {
      throw NoContraction("iteration " + std::to_string(n) + " produced a non-finite update");
    }
    slow = (!std::isfinite(static_cast<double>(ratio)) || ratio > Scalar(0.95)) ? slow + 1 : 0;
    if (slow >= 3) {
      std::ostringstream msg;
      msg << "contraction ratio above 0.95 for 3 consecutive iterations (last " << ratio
          << ", ||phi||_{H^sigma0} = " << history.data_norm << ")";
      throw NoContraction(msg.str());
    }
    if (delta < tol * static_cast<Scalar>(history.data_norm))
      return {detail::trajectory_from_spectra(current, grid, settings.dt), history};
    previous_delta = delta;
  }
  throw MaxIterExceeded("no convergence to tol " + std::to_string(static_cast<double>(tol)) + " within " +
                        std::to_string(max_iter) + " iterations");
}

// ---------------------------------------------------------------------------
// Sphere-valued implicit midpoint integrator

/// Implicit midpoint steps (s_{m+1} - s_m)/dt = s_mid x Delta s_mid.
///
/// The implicit equation is solved by fixed-point sweeps in which the skew
/// part e3 x Delta s_mid is inverted exactly in Fourier space (a Cayley
/// factor) and only (s_mid - e3) x Delta s_mid is lagged. The converged
/// update is orthogonal to s_mid, so |s| is conserved up to the sweep
/// tolerance. Snapshots record the raw deviation from unit length.
template <typename Scalar>
SphereTrajectory<Scalar> midpoint_solve(const SphereField<Scalar>& s0, Scalar T, Scalar dt, Scalar inner_tol,
                                        int max_sweeps = 100) {
  const int steps = step_count(T, dt);
  const GridSpec& grid = s0.grid();
  const auto& table = wave_table<Scalar>(grid);
  const auto size = static_cast<Eigen::Index>(grid.size());
  using Complex = std::complex<Scalar>;
  const Complex half_i(0, dt / Scalar(2));

  ComplexValues<Scalar> cayley_num(size), cayley_den(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    cayley_num(i) = Scalar(1) - half_i * table.xi2(i);
    cayley_den(i) = Scalar(1) + half_i * table.xi2(i);
  }
  const ComplexValues<Scalar> neg_xi2 = (-table.xi2).template cast<Complex>();

  SphereTrajectory<Scalar> traj(grid, dt);
  traj.push_back(s0);
  Vector3Values<Scalar> state = s0.values();

  ComplexValues<Scalar> w_hat, w_mid, s3_mid, g_w;
  Vector3Values<Scalar> next(size, 3), mid(size, 3), lap(size, 3), change(size, 3);
  for (int m = 1; m <= steps; ++m) {
    w_hat = state.col(0).template cast<Complex>() + Complex(0, 1) * state.col(1).template cast<Complex>();
    detail::transform_in_place(w_hat, grid, false);
    const ComplexValues<Scalar> w_rhs = cayley_num * w_hat;

    next = state;
    int sweep = 0;
    for (;;) {
      if (++sweep > max_sweeps) {
        throw InnerDivergence("midpoint step " + std::to_string(m) + " did not converge in " +
                              std::to_string(max_sweeps) + " sweeps");
      }
      mid = Scalar(0.5) * (state + next);
      w_mid = mid.col(0).template cast<Complex>() + Complex(0, 1) * mid.col(1).template cast<Complex>();
      detail::transform_in_place(w_mid, grid, false);
      w_mid *= neg_xi2;
      detail::transform_in_place(w_mid, grid, true);
      s3_mid = mid.col(2).template cast<Complex>();
      detail::transform_in_place(s3_mid, grid, false);
      s3_mid *= neg_xi2;
      detail::transform_in_place(s3_mid, grid, true);
      lap.col(0) = w_mid.real();
      lap.col(1) = w_mid.imag();
      lap.col(2) = s3_mid.real();

      Vector3Values<Scalar> offset = mid;
      offset.col(2) -= Scalar(1);
      const Vector3Values<Scalar> lagged = detail::cross(offset, lap);

      g_w = lagged.col(0).template cast<Complex>() + Complex(0, 1) * lagged.col(1).template cast<Complex>();
      detail::transform_in_place(g_w, grid, false);
      ComplexValues<Scalar> w_new = (w_rhs + dt * g_w) / cayley_den;
      detail::transform_in_place(w_new, grid, true);

      change.col(0) = w_new.real() - next.col(0);
      change.col(1) = w_new.imag() - next.col(1);
      change.col(2) = state.col(2) + dt * lagged.col(2) - next.col(2);
      next += change;
      const Scalar delta = change.abs().maxCoeff();
      if (!std::isfinite(static_cast<double>(delta)))
        throw InnerDivergence("midpoint step " + std::to_string(m) + " produced non-finite values");
      if (delta < inner_tol) break;
    }
    state = next;
    traj.push_back(SphereField<Scalar>(grid, state, traj.time(m)));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Uniqueness diagnostic

struct GronwallReport {
  std::vector<double> times;
  std::vector<double> energy;  ///< E(t) = ||q||^2 + sum_l ||d_l q||^2, q = s' - s
  std::vector<double> rate;    ///< dE/dt / E, NaN where E is below the floor
  double gronwall_constant = 0;  ///< sup_t |dE/dt| / E
  double max_energy = 0;
  bool identical = false;  ///< E below the floor at every time
};

/// Fourth-order finite-difference derivative of uniformly sampled data.
inline std::vector<double> differentiate4(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw DegenerateInput("fourth-order differencing needs at least 5 samples");
  std::vector<double> df(n);
  const double c = 1.0 / (12.0 * h);
  df[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  df[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t m = 2; m + 2 < n; ++m) df[m] = c * (f[m - 2] - 8 * f[m - 1] + 8 * f[m + 1] - f[m + 2]);
  df[n - 2] = -c * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
  df[n - 1] = -c * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
  return df;
}

/// Energy of the difference of two sphere trajectories and its empirical
/// growth rate.
template <typename Scalar>
GronwallReport gronwall_diagnostic(const SphereTrajectory<Scalar>& a, const SphereTrajectory<Scalar>& b,
                                   double energy_floor = 1e-28) {
  require_same_grid(a.grid(), b.grid(), "gronwall_diagnostic");
  if (a.size() != b.size() || std::abs(a.dt() - b.dt()) > Scalar(1e-14) || std::abs(a.t0() - b.t0()) > Scalar(1e-14))
    throw GridMismatch("gronwall_diagnostic: trajectories use different time grids");
  const GridSpec& grid = a.grid();
  const auto& table = wave_table<Scalar>(grid);
  RealValues<Scalar> weight = RealValues<Scalar>::Ones(static_cast<Eigen::Index>(grid.size()));
  for (const auto& x : table.xi) weight += x.square();

  GronwallReport report;
  for (int m = 0; m < a.size(); ++m) {
    Scalar e = 0;
    for (int l = 0; l < 3; ++l) {
      ComplexValues<Scalar> q = (b[m].component(l) - a[m].component(l)).template cast<std::complex<Scalar>>();
      detail::transform_in_place(q, grid, false);
      e += (weight * q.abs2()).sum();
    }
    report.times.push_back(static_cast<double>(a.time(m)));
    report.energy.push_back(static_cast<double>(e) * grid.cell_volume());
  }
  const auto de = differentiate4(report.energy, static_cast<double>(a.dt()));
  report.identical = true;
  for (std::size_t m = 0; m < de.size(); ++m) {
    const double e = report.energy[m];
    report.max_energy = std::max(report.max_energy, e);
    if (e < energy_floor) {
      report.rate.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    report.identical = false;
    report.rate.push_back(de[m] / e);
    report.gronwall_constant = std::max(report.gronwall_constant, std::abs(de[m] / e));
  }
  return report;
}

}  // namespace smap
