#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <complex>
#include <limits>
#include <numbers>

#include "smap/harness/experiments.hpp"
#include "smap/spacetime.hpp"
#include "support/oracles.hpp"

using namespace smap;
using namespace smap::harness;
using Complex = std::complex<double>;

namespace {

const double inf = std::numeric_limits<double>::infinity();

// Cutoff profile written out again from its definition, for the oracles.
double bump(double r) {
  auto theta = [](double x) { return x > 0 ? std::exp(-1 / x) : 0.0; };
  const double x = (std::abs(r) - 1.25) / 0.35;
  if (x <= 0) return 1;
  if (x >= 1) return 0;
  return 1 - theta(x) / (theta(x) + theta(1 - x));
}
double shell(int j, double r) { return j == 0 ? bump(r) : bump(r / std::ldexp(1, j)) - bump(r / std::ldexp(1, j - 1)); }

ComplexFieldd plane_wave(const GridSpec& g, int m0, int m1, Complex amp = 1.0) {
  ComplexValues<double> v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto x = oracle::position(g, f);
    v(static_cast<Eigen::Index>(f)) = amp * std::polar(1.0, (m0 * x[0] + m1 * x[1]) / g.period);
  }
  return ComplexFieldd(g, v, Representation::physical);
}

std::size_t flat_index(const GridSpec& g, int m0, int m1) {
  auto idx = [&](int m) { return static_cast<std::size_t>((m % g.n + g.n) % g.n); };
  return idx(m0) * g.n + idx(m1);
}

// Window power P(l) on the spectrum's time lattice.
std::vector<double> window_power(double T_w, int M) {
  return oracle::window_power([&](double t) { return bump(1.6 * t / T_w); }, T_w, M);
}

double offset(int l, int M, double T_w) { return (l < M / 2 ? l : l - M) * std::numbers::pi / T_w; }

// X_k of a windowed free plane wave of physical amplitude A with |xi0| in shell k.
// An optional time multiplier m(tau') scales the window power by m^2.
double free_mode_xk(const GridSpec& g, double A, double T_w, int M, int j_from = 0,
                    const std::function<double(double)>& m = {}) {
  const auto P = window_power(T_w, M);
  const double cell = g.cell_volume() * 2 * T_w / M;
  double total = 0;
  int levels = 0;
  while (0.625 * std::ldexp(1.0, levels + 1) < (M / 2) * std::numbers::pi / T_w) ++levels;
  for (int j = j_from; j <= levels; ++j) {
    double mass = 0;
    for (int l = 0; l < M; ++l) {
      const double tau = offset(l, M, T_w), w = m ? m(tau) : 1.0;
      mass += std::pow(shell(j, std::abs(tau)) * w, 2) * P[l];
    }
    total += std::sqrt(std::ldexp(1.0, j) * mass * A * A * g.size() * cell);
  }
  return total;
}

SpaceTimeSamples<double> constant_samples(const GridSpec& g, int steps, double T_w, Complex c) {
  return {g, -T_w, 2 * T_w / steps, steps,
          ComplexValues<double>::Constant(static_cast<Eigen::Index>(g.size() * steps), c)};
}

}  // namespace

TEST(SpacetimeTransform, ZeroTrajectory) {
  const GridSpec g{2, 16, 1.0};
  const auto F = spacetime_transform(free_trajectory(ComplexFieldd(g), 0.5, 1.0 / 64));
  EXPECT_EQ(F.values.abs().maxCoeff(), 0.0);
  EXPECT_EQ(F.steps, 64);
}

TEST(SpacetimeTransform, WindowTooShort) {
  const GridSpec g{2, 16, 1.0};
  EXPECT_THROW(spacetime_transform(free_trajectory(ComplexFieldd(g), 0.5, 1.0 / 64), 1.0, 8), WindowTooShort);
}

TEST(SpacetimeTransform, SingleModeConcentratesOnParaboloid) {
  const GridSpec g{2, 16, 1.0};
  const double T_w = 1.0;
  const int M = 64;
  const auto F = spacetime_transform(free_trajectory(plane_wave(g, 3, -2), 0.5, 1.0 / 64), T_w, M);
  const std::size_t f0 = flat_index(g, 3, -2);
  const auto P = window_power(T_w, M);
  double near = 0, total = 0, oracle_near = 0, oracle_total = 0;
  for (int l = 0; l < M; ++l) {
    const double m = std::norm(F.values(static_cast<Eigen::Index>(l * g.size() + f0)));
    const bool close = std::abs(F.offset(l)) <= 16 / T_w;
    (close ? near : total) += m;
    (close ? oracle_near : oracle_total) += P[l];
  }
  total += near;
  oracle_total += oracle_near;
  EXPECT_NEAR(near / total, oracle_near / oracle_total, 1e-12);
  EXPECT_GT(near / total, 0.99);
  // All of the mass sits on the xi0 row.
  EXPECT_NEAR(total * F.cell(), std::pow(F.l2_norm(), 2), 1e-12 * std::pow(F.l2_norm(), 2));
}

TEST(SpacetimeTransform, PlancherelAgainstWindowedSamples) {
  const GridSpec g{2, 16, 1.0};
  const auto phi = seeded_data(g, DataSpec{DataKind::random_bandlimited, 1.0, 1.6, 1.0, 4});
  const double T_w = 1.0;
  const int M = 32;
  const auto F = spacetime_transform(free_trajectory(phi, 0.5, 1.0 / 64), T_w, M);
  double direct = 0;
  for (int i = 0; i < M; ++i) {
    const double t = -T_w + i * 2 * T_w / M;
    direct += std::pow(bump(1.6 * t / T_w), 2) * std::pow(free_propagate(phi, t).l2_norm(), 2);
  }
  direct *= 2 * T_w / M;
  EXPECT_NEAR(F.l2_norm() / std::sqrt(direct), 1.0, 1e-12);
  const auto s = to_samples(F);
  const auto back = spectrum_from_samples(s);
  EXPECT_LT((back.values - F.values).abs().maxCoeff(), 1e-12 * F.values.abs().maxCoeff());
}

TEST(Masks, IdempotentAndAnnihilating) {
  const GridSpec g{2, 32, 1.0};
  const auto phi = seeded_data(g, DataSpec{DataKind::random_bandlimited, 1.0, 1.6, 1.0, 5});
  const auto F = spacetime_transform(free_trajectory(phi, 0.5, 1.0 / 64), 1.0, 32);
  for (int k : {0, 2, 3}) {
    for (int j : {-1, 0, 3}) {
      const auto once = mask_region(F, k, j), twice = mask_region(once, k, j);
      EXPECT_EQ((once.values - twice.values).abs().maxCoeff(), 0.0);
    }
    // Shell k+3 and shell k share no modes.
    EXPECT_EQ(xk_norm(mask_region(F, k), k + 3), 0.0);
  }
}

TEST(Masks, ShellCompleteness) {
  // The annuli A_k = D_{k} minus D_{k+1} tile frequency space.
  const GridSpec g{2, 32, 1.0};
  const auto phi = seeded_data(g, DataSpec{DataKind::random_bandlimited, 1.0, 0.0, 1.0, 6});
  const auto F = spacetime_transform(free_trajectory(phi, 0.5, 1.0 / 64), 1.0, 32);
  double sum = 0;
  for (int k = 0; k <= g.k_max() + 1; ++k) {
    const auto in_k = mask_region(F, k);
    const ComplexValues<double> annulus = in_k.values - mask_region(in_k, k + 1).values;
    sum += annulus.abs2().sum() * F.cell();
  }
  EXPECT_NEAR(sum / std::pow(F.l2_norm(), 2), 1.0, 1e-10);
}

TEST(XkNorm, ZeroSpectrum) {
  const GridSpec g{2, 16, 1.0};
  SpaceTimeSpectrum<double> F{g, 1.0, 32, ComplexValues<double>::Zero(static_cast<Eigen::Index>(g.size() * 32))};
  for (int k = 0; k <= g.k_max(); ++k) EXPECT_EQ(xk_norm(F, k), 0.0);
  EXPECT_EQ(fsigma_upper(F, 1.6), 0.0);
  EXPECT_EQ(nsigma_upper(F, 1.6), 0.0);
}

TEST(XkNorm, OnePointSpectrum) {
  // T_w = pi puts tau + |xi|^2 on the integers.
  const GridSpec g{2, 32, 1.0};
  const int M = 16;
  const Complex a(0.6, -0.8);
  const std::size_t f0 = flat_index(g, 5, 0);
  for (int l : {1, 3}) {
    SpaceTimeSpectrum<double> F{g, std::numbers::pi, M,
                                ComplexValues<double>::Zero(static_cast<Eigen::Index>(g.size() * M))};
    F.values(static_cast<Eigen::Index>(l * g.size() + f0)) = a;
    ASSERT_DOUBLE_EQ(F.offset(l), l);
    double expect = 0;
    for (int j = 0; j <= 4; ++j) expect += std::sqrt(std::ldexp(1.0, j)) * shell(j, l) * std::abs(a);
    expect *= std::sqrt(F.cell());
    if (l == 1) EXPECT_NEAR(expect, std::abs(a) * std::sqrt(F.cell()), 1e-15);
    if (l == 3)
      EXPECT_NEAR(expect, (std::sqrt(2.0) * bump(1.5) + 2 * (1 - bump(1.5))) * std::abs(a) * std::sqrt(F.cell()),
                  1e-15);
    EXPECT_NEAR(xk_norm(F, 2), expect, 1e-14 * expect);
    EXPECT_EQ(xk_norm(F, 5), 0.0);
  }
}

TEST(XkNorm, FreeModeMatchesWindowOracle) {
  const GridSpec g{2, 32, 1.0};
  const int M = 64;
  for (double T_w : {1.0, 2.0}) {
    const auto F = spacetime_transform(free_trajectory(plane_wave(g, 4, 0, 0.5), 0.5, 1.0 / 64), T_w, M);
    const double xk = xk_norm(shell_project(F, 2), 2);
    EXPECT_NEAR(xk / free_mode_xk(g, 0.5, T_w, M), 1.0, 1e-10);
    // Modulation-filtered pieces, library against oracle.
    for (int j = 3; j <= modulation_levels(F); ++j) {
      const auto m = [&](double tau) { return eta_shell(j, std::abs(tau)); };
      const double lib = xk_norm(apply_time_multiplier(F, m), 2);
      EXPECT_NEAR(lib / free_mode_xk(g, 0.5, T_w, M, 0, m), 1.0, 1e-10) << j;
    }
  }
}

TEST(FsigmaUpper, FreeModeAtZeroSigmaAndMonotone) {
  const GridSpec g{2, 32, 1.0};
  const int M = 64;
  // |xi0| = 4 = 2^2 lies only in eta_2, so F^0 reduces to one X_k term.
  const auto F = spacetime_transform(free_trajectory(plane_wave(g, 4, 0, 0.5), 0.5, 1.0 / 64), 1.0, M);
  EXPECT_NEAR(fsigma_upper(F, 0.0) / free_mode_xk(g, 0.5, 1.0, M), 1.0, 1e-10);
  double last = 0;
  for (double s : {0.0, 0.5, 1.0, 1.6, 2.6}) {
    const double v = fsigma_upper(F, s);
    EXPECT_GT(v, last);
    last = v;
  }
  EXPECT_LT(nsigma_upper(F, 1.6), fsigma_upper(F, 1.6));
}

TEST(Directions, LatticeSetIsUnitAndSymmetric) {
  for (int d : {2, 3}) {
    const auto set = DirectionSet::lattice(d);
    EXPECT_EQ(set.directions.size(), static_cast<std::size_t>(2 * d + 2 * d * (d - 1)));
    for (const auto& e : set.directions) {
      double n2 = 0;
      for (double c : e) n2 += c * c;
      EXPECT_NEAR(std::sqrt(n2), 1.0, 1e-15);
      bool has_negation = false;
      for (const auto& f : set.directions) {
        bool same = true;
        for (int a = 0; a < d; ++a) same = same && f[a] == -e[a];
        has_negation = has_negation || same;
      }
      EXPECT_TRUE(has_negation);
    }
  }
}

TEST(LpqNorm, ConstantFunction) {
  const GridSpec g{2, 16, 1.0};
  const double T_w = 1.0;
  const auto s = constant_samples(g, 16, T_w, 1.0);
  const double volume = g.volume() * 2 * T_w;
  for (const auto& e : DirectionSet::lattice(2).directions)
    EXPECT_NEAR(lpq_norm(s, e, 2.0, 2.0), std::sqrt(volume), 1e-12 * std::sqrt(volume));
}

TEST(LpqNorm, TwoTwoIsSpaceTimeL2) {
  for (const GridSpec g : {GridSpec{2, 16, 1.0}, GridSpec{3, 8, 0.5}}) {
    const int steps = 16;
    const auto raw = oracle::random_samples(g.size() * steps, 31);
    SpaceTimeSamples<double> s{g, -1.0, 2.0 / steps, steps, ComplexValues<double>(static_cast<Eigen::Index>(raw.size()))};
    for (std::size_t i = 0; i < raw.size(); ++i) s.values(static_cast<Eigen::Index>(i)) = raw[i];
    const double l2 = std::sqrt(s.values.abs2().sum() * g.cell_volume() * s.dt);
    for (const auto& e : DirectionSet::lattice(g.d).directions)
      EXPECT_NEAR(lpq_norm(s, e, 2.0, 2.0) / l2, 1.0, 1e-12);
  }
}

TEST(LpqNorm, SeparableFunctionsFactorize) {
  const GridSpec g{2, 16, 1.0};
  const int steps = 16, n = g.n;
  const double h = g.spacing(), dt = 2.0 / steps;
  const auto a = oracle::random_samples(n, 41);
  const auto b = oracle::random_samples(n * steps, 42);
  const double r = 1 / std::sqrt(2.0);
  struct Case {
    std::vector<double> e;
    double dr;
  };
  for (const Case& c : {Case{{1, 0}, h}, Case{{0, -1}, h}, Case{{r, r}, h * r}, Case{{r, -r}, h * r}}) {
    // f(i0, i1, t) = a[class] * b[position within fiber, t]
    const auto fib = detail::fibration(g, c.e);
    SpaceTimeSamples<double> s{g, -1.0, dt, steps, ComplexValues<double>(static_cast<Eigen::Index>(g.size() * steps))};
    for (int t = 0; t < steps; ++t)
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1) {
          int cls = fib.sa * (fib.a == 0 ? i0 : i1);
          if (fib.b >= 0) cls += fib.sb * i1;
          cls = ((cls % n) + n) % n;
          const int along = fib.b >= 0 ? i0 : (fib.a == 0 ? i1 : i0);
          s.values(static_cast<Eigen::Index>(t * g.size() + i0 * n + i1)) = a[cls] * b[along * steps + t];
        }
    // One-dimensional quadratures.
    const double fiber_weight = h * h / c.dr * dt;
    double b2 = 0, binf = 0;
    for (const auto& z : b) b2 += std::norm(z) * fiber_weight, binf = std::max(binf, std::abs(z));
    b2 = std::sqrt(b2);
    double a1 = 0, a2 = 0, ainf = 0;
    for (const auto& z : a) a1 += std::abs(z) * c.dr, a2 += std::norm(z) * c.dr, ainf = std::max(ainf, std::abs(z));
    a2 = std::sqrt(a2);
    const double as[3] = {a1, a2, ainf}, ps[3] = {1.0, 2.0, inf};
    for (int pi = 0; pi < 3; ++pi) {
      const double v2 = as[pi] * b2, vinf = as[pi] * binf;
      EXPECT_NEAR(lpq_norm(s, c.e, ps[pi], 2.0) / v2, 1.0, 1e-10);
      EXPECT_NEAR(lpq_norm(s, c.e, ps[pi], inf) / vinf, 1.0, 1e-10);
    }
  }
}

TEST(LpqNorm, NestingByCauchySchwarz) {
  const GridSpec g{2, 16, 1.0};
  const int steps = 16;
  const auto raw = oracle::random_samples(g.size() * steps, 51);
  SpaceTimeSamples<double> s{g, -1.0, 2.0 / steps, steps, ComplexValues<double>(static_cast<Eigen::Index>(raw.size()))};
  for (std::size_t i = 0; i < raw.size(); ++i) s.values(static_cast<Eigen::Index>(i)) = raw[i];
  const auto c = constant_samples(g, steps, 1.0, Complex(0.3, 0.4));
  for (const auto& e : DirectionSet::lattice(2).directions) {
    const double extent = fiber_extent(g, e);
    EXPECT_LE(lpq_norm(s, e, 1.0, 2.0), std::sqrt(extent) * lpq_norm(s, e, 2.0, 2.0) * (1 + 1e-10));
    EXPECT_NEAR(lpq_norm(c, e, 1.0, 2.0) / (std::sqrt(extent) * lpq_norm(c, e, 2.0, 2.0)), 1.0, 1e-10);
  }
}

TEST(LpqNorm, RejectsNonLatticeDirections) {
  const GridSpec g{2, 16, 1.0};
  const auto s = constant_samples(g, 16, 1.0, 1.0);
  EXPECT_THROW(lpq_norm(s, {0.6, 0.8}, 2.0, 2.0), UnsupportedDirection);
  EXPECT_THROW(lpq_norm(s, {1.0, 0.0, 0.0}, 2.0, 2.0), UnsupportedDirection);
  EXPECT_THROW(lpq_norm(s, {1.0, 0.0}, 3.0, 2.0), std::invalid_argument);
}

TEST(LemmaDiagnostics, EmptyEnsembleAndZeroMember) {
  const GridSpec g{2, 32, 1.0};
  const auto dirs = DirectionSet::lattice(2);
  EXPECT_THROW(lemma_diagnostics<double>({}, {}, dirs, 2, 3), EmptyEnsemble);
  const auto zero = spacetime_transform(free_trajectory(ComplexFieldd(g), 0.5, 1.0 / 64), 1.0, 16);
  const auto one = spacetime_transform(free_trajectory(plane_wave(g, 4, 0), 0.5, 1.0 / 64), 1.0, 16);
  const auto res = lemma_diagnostics<double>({zero, one}, {"zero", "mode"}, dirs, 2, 3);
  ASSERT_FALSE(res.report.flags.empty());
  EXPECT_NE(res.report.flags[0].find("zero"), std::string::npos);
  for (const auto& row : res.report.rows) EXPECT_EQ(row.trajectory_id, "mode");
}

TEST(LemmaDiagnostics, SingleModeShellScaling) {
  // Plane waves e^{i 2^k x_1} on n = 128, P = 1, shells k = 2..5. Every fiber
  // along an axis carries the same mass, so
  //   R2 = 2^{k/2} C2, R3 = 2^{-k/2} (k+1)^{-2} C3, R4 = C4
  // with k-independent C's: the slopes in k are exactly 1/2, the closed form
  // for R3, and 0.
  const GridSpec g{2, 128, 1.0};
  std::vector<SpaceTimeSpectrum<double>> ens;
  std::vector<std::string> ids;
  for (int k = 2; k <= 5; ++k) {
    ens.push_back(spacetime_transform(free_trajectory(plane_wave(g, 1 << k, 0), 0.5, 1.0 / 64), 1.0, 16));
    ids.push_back("k" + std::to_string(k));
  }
  DirectionSet axes{{{1.0, 0.0}, {0.0, 1.0}}};
  const auto res = lemma_diagnostics(ens, ids, axes, 2, 5);
  std::vector<int> ks;
  std::vector<double> r2, r3, r4, r1;
  for (const auto& row : res.report.rows) {
    if (row.trajectory_id != "k" + std::to_string(row.k)) continue;
    if (row.quantity == "R2" && row.direction == direction_label({1.0, 0.0})) ks.push_back(row.k), r2.push_back(row.value);
    if (row.quantity == "R3" && row.direction == direction_label({1.0, 0.0})) r3.push_back(row.value);
    if (row.quantity == "R4") r4.push_back(row.value);
    if (row.quantity == "R1") r1.push_back(row.value);
  }
  ASSERT_EQ(ks.size(), 4u);
  EXPECT_NEAR(log2_slope(ks, r2), 0.5, 1e-10);
  EXPECT_NEAR(log2_slope(ks, r4), 0.0, 1e-10);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double k = ks[i], k0 = ks[0];
    EXPECT_NEAR(r3[i] / r3[0], std::pow(2.0, -(k - k0) / 2) * std::pow((k0 + 1) / (k + 1), 2), 1e-10);
  }
  for (double v : r1) EXPECT_LE(v, 1.0 + 1e-12);
}

TEST(LemmaDiagnostics, EnergyRatioBoundedOnEnsemble) {
  ExperimentConfig cfg;
  cfg.ensemble_size = 8;
  cfg.k_lo = 2;
  cfg.k_hi = 4;
  cfg.time_samples = 32;
  const auto study = run_lemma_study(cfg);
  EXPECT_TRUE(study.all_finite);
  for (double v : study.result.maxima.r4) EXPECT_LE(v, 2.0);
  for (double v : study.result.maxima.r1) EXPECT_LE(v, 1.0 + 1e-12);
  for (double v : study.result.maxima.r2) EXPECT_TRUE(std::isfinite(v));
  for (double v : study.result.maxima.r3) EXPECT_TRUE(std::isfinite(v));
}
