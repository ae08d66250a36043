#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "smap/geometry.hpp"
#include "smap/harness/experiments.hpp"
#include "smap/solver.hpp"
#include "support/oracles.hpp"

using namespace smap;
using namespace smap::harness;
using Complex = std::complex<double>;

namespace {

ComplexFieldd plane_wave(const GridSpec& g, int m0, int m1, Complex amp) {
  ComplexValues<double> v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto x = oracle::position(g, f);
    v(static_cast<Eigen::Index>(f)) = amp * std::polar(1.0, (m0 * x[0] + m1 * x[1]) / g.period);
  }
  return ComplexFieldd(g, v, Representation::physical);
}

double max_diff(const ComplexFieldd& a, const ComplexFieldd& b) {
  return (to_physical(a).values() - to_physical(b).values()).abs().maxCoeff();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;  // d=2, n=64, P=2, T=0.5, dt=1/256
  return cfg;
}

}  // namespace

TEST(StepCount, Validation) {
  EXPECT_EQ(step_count(0.5, 1.0 / 256), 128);
  EXPECT_THROW(step_count(0.5, 0.3), std::invalid_argument);
  EXPECT_THROW(step_count(0.5, 0.0), std::invalid_argument);
}

TEST(DuhamelMap, ZeroPreviousGivesFreeEvolution) {
  const GridSpec g{2, 32, 1.0};
  const auto phi = seeded_data(g, DataSpec{DataKind::random_bandlimited, 0.1, 1.6, 1.0, 3});
  ChartTrajectory<double> zero(g, 1.0 / 32);
  for (int m = 0; m <= 8; ++m) zero.push_back(ComplexFieldd(g, Representation::physical, zero.time(m)));
  const auto out = duhamel_map(phi, zero);
  ASSERT_EQ(out.size(), 9);
  for (int m = 0; m < out.size(); ++m) EXPECT_LT(max_diff(out[m], free_propagate(phi, out.time(m))), 1e-14);
}

TEST(DuhamelMap, ZeroDataStartsAtZero) {
  const GridSpec g{2, 32, 1.0};
  const auto psi = seeded_data(g, DataSpec{DataKind::gaussian_bump, 0.05, 1.6, 0.7, 0});
  const auto prev = free_trajectory(psi, 0.25, 1.0 / 64);
  const auto out = duhamel_map(ComplexFieldd(g), prev);
  EXPECT_EQ(out[0].values().abs().maxCoeff(), 0.0);
  EXPECT_GT(out[out.size() - 1].values().abs().maxCoeff(), 0.0);
}

TEST(DuhamelMap, GridMismatch) {
  const auto prev = free_trajectory(ComplexFieldd(GridSpec{2, 16, 1.0}), 0.125, 1.0 / 64);
  EXPECT_THROW(duhamel_map(ComplexFieldd(GridSpec{2, 32, 1.0}), prev), GridMismatch);
}

// prev(s) = eps e^{i x.xi0 - i omega s}, so N(prev(s)) = c prev(s) with
// c = -2|xi0|^2 |eps|^2 / (1 + |eps|^2), and the Duhamel integral is
// c eps e^{i x.xi0 - i t|xi0|^2} int_0^t e^{i s (|xi0|^2 - omega)} ds.
TEST(DuhamelMap, SingleModeMatchesDuhamelIntegral) {
  const GridSpec g{2, 16, 1.0};
  const Complex eps(0.2, 0.05);
  const int m0 = 2, m1 = 1;
  const double xi2 = 5.0, omega = 11.0, T = 0.5;
  const double c = -2 * xi2 * std::norm(eps) / (1 + std::norm(eps));
  const auto phi = plane_wave(g, m0, m1, 0.1);

  auto exact = [&](double t) {
    const double a = xi2 - omega;
    const Complex integral = (std::polar(1.0, a * t) - 1.0) / Complex(0, a);
    return 0.1 * std::polar(1.0, -t * xi2) - Complex(0, 1) * c * eps * std::polar(1.0, -t * xi2) * integral;
  };
  // Independent check of the closed form: trapezoid at 16x finer step.
  auto refined = [&](double t) {
    const int fine = 16 * 64;
    const double h = t / fine;
    Complex s = 0;
    for (int i = 0; i <= fine; ++i) {
      const double si = i * h;
      s += (i == 0 || i == fine ? 0.5 : 1.0) * std::polar(1.0, -(t - si) * xi2 - omega * si);
    }
    return 0.1 * std::polar(1.0, -t * xi2) - Complex(0, 1) * c * eps * s * h;
  };
  EXPECT_LT(std::abs(exact(T) - refined(T)), 1e-6);

  double errs[2];
  for (int level = 0; level < 2; ++level) {
    const double dt = (1.0 / 32) / (1 << level);
    ChartTrajectory<double> prev(g, dt);
    for (int m = 0; m <= step_count(T, dt); ++m) {
      auto f = plane_wave(g, m0, m1, eps * std::polar(1.0, -omega * prev.time(m)));
      f.set_time(prev.time(m));
      prev.push_back(f);
    }
    const auto out = duhamel_map(phi, prev, DealiasPolicy::none());
    double err = 0;
    for (int m = 0; m < out.size(); ++m) {
      const auto expect = plane_wave(g, m0, m1, exact(out.time(m)));
      err = std::max(err, max_diff(out[m], expect));
    }
    errs[level] = err;
  }
  EXPECT_LT(errs[0], 1e-3);
  EXPECT_NEAR(std::log2(errs[0] / errs[1]), 2.0, 0.1);
}

TEST(PicardSolve, ZeroDataShortCircuits) {
  const GridSpec g{2, 32, 1.0};
  auto [u, history] = picard_solve(ComplexFieldd(g), 0.5, 1e-10, 40, PicardSettings<double>{1.6, 1.0 / 64, {}});
  EXPECT_TRUE(history.records.empty());
  EXPECT_EQ(u.size(), 33);
  for (const auto& f : u) EXPECT_EQ(f.values().abs().maxCoeff(), 0.0);
}

TEST(PicardSolve, SmallDataContractsAtHalfRate) {
  const auto run = run_contraction(small_config(), 1e-3, true);
  ASSERT_TRUE(run.converged) << run.error;
  ASSERT_FALSE(run.history.records.empty());
  for (std::size_t i = 0; i < run.history.records.size(); ++i) {
    const auto& r = run.history.records[i];
    EXPECT_EQ(r.n, static_cast<int>(i) + 1);
    EXPECT_TRUE(std::isfinite(r.ratio));
    EXPECT_LE(r.ratio, 0.5) << "iteration " << r.n;
  }
  EXPECT_LE(run.residual, 2 * small_config().tol);
}

TEST(PicardSolve, LargeDataRaisesNoContraction) {
  const auto cfg = small_config();
  const auto phi = seeded_data(cfg.grid(), data_spec(cfg, 100.0));
  EXPECT_THROW(picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, picard_settings(cfg)), NoContraction);
}

TEST(PicardSolve, IterationCapRaisesMaxIterExceeded) {
  const auto cfg = small_config();
  // Contracting, but far too slowly to reach tol in two iterations.
  const auto phi = seeded_data(cfg.grid(), data_spec(cfg, 1.0));
  EXPECT_THROW(picard_solve(phi, cfg.T, cfg.tol, 2, picard_settings(cfg)), MaxIterExceeded);
}

TEST(PicardSolve, HorizonAboveOneRejected) {
  const GridSpec g{2, 16, 1.0};
  EXPECT_THROW(picard_solve(ComplexFieldd(g), 1.5, 1e-10, 40, PicardSettings<double>{1.6, 1.0 / 16, {}}),
               std::invalid_argument);
}

TEST(PicardSolve, ContractionDegradesMonotonicallyWithAmplitude) {
  const auto cfg = small_config();
  double last = 0;
  for (double a : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    const auto run = run_contraction(cfg, a);
    ASSERT_TRUE(run.converged) << "amplitude " << a << ": " << run.error;
    EXPECT_GE(run.worst_ratio, last) << "amplitude " << a;
    last = run.worst_ratio;
  }
  EXPECT_FALSE(run_contraction(cfg, 100.0).converged);
}

TEST(PicardSolve, UniformIterateBound) {
  const auto cfg = small_config();
  double lo = 1e300, hi = 0;
  for (double a : {1e-3, 1e-2, 1e-1}) {
    const auto run = run_contraction(cfg, a);
    ASSERT_TRUE(run.converged);
    double worst = 0;
    for (const auto& r : run.history.records) worst = std::max(worst, r.norm / run.history.data_norm);
    lo = std::min(lo, worst);
    hi = std::max(hi, worst);
  }
  // One constant for every iterate and amplitude in the small regime.
  EXPECT_LT(hi, 1.5);
  EXPECT_LT(hi / lo, 1.1);
}

TEST(PicardSolve, HigherRegularityPersists) {
  ExperimentConfig cfg = small_config();
  cfg.T = 0.25;
  for (double extra : {1.0, 2.0}) {
    double norms[2];
    for (int level = 0; level < 2; ++level) {
      const GridSpec g{2, 64 << level, cfg.period};
      const auto phi = seeded_data(g, data_spec(cfg, 1e-2));
      const auto u = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, picard_settings(cfg)).first;
      norms[level] = sup_sobolev(u, cfg.sigma0 + extra);
    }
    EXPECT_TRUE(std::isfinite(norms[0]));
    EXPECT_NEAR(norms[1] / norms[0], 1.0, 1e-8) << "sigma' = " << extra;
  }
}

TEST(Midpoint, NorthPoleIsStationary) {
  const GridSpec g{2, 16, 1.0};
  const auto s = midpoint_solve(SphereFieldd::constant(g, 0, 0, 1), 0.25, 1.0 / 64, 1e-12);
  EXPECT_EQ(s.size(), 17);
  for (const auto& f : s) EXPECT_LT((f.component(2) - 1).abs().maxCoeff(), 1e-15);
}

TEST(Midpoint, ConservesUnitLength) {
  const auto cfg = small_config();
  const double inner = 1e-12;
  const auto s = midpoint_solve(seeded_sphere(cfg.grid(), data_spec(cfg, 0.5)), 0.25, cfg.dt, inner);
  double worst = 0;
  for (const auto& f : s) worst = std::max(worst, f.normalization_defect());
  EXPECT_LE(worst, 10 * inner);
}

TEST(Midpoint, SweepCapRaisesInnerDivergence) {
  const auto cfg = small_config();
  EXPECT_THROW(midpoint_solve(seeded_sphere(cfg.grid(), data_spec(cfg, 0.1)), 0.25, cfg.dt, 1e-12, 1),
               InnerDivergence);
}

TEST(CrossValidation, ChartAndSphereRoutesConverge) {
  ExperimentConfig cfg = small_config();
  cfg.n = 32;
  cfg.T = 0.25;
  cfg.dt = 1.0 / 64;
  const auto study = run_compare(cfg, 1e-2, 2);
  ASSERT_EQ(study.orders.size(), 1u);
  EXPECT_LT(study.levels[1].distance, study.levels[0].distance);
  EXPECT_GE(study.orders[0], 1.8) << study.levels[0].distance << " -> " << study.levels[1].distance;
}

TEST(Gronwall, IdenticalTrajectoriesFlagged) {
  const GridSpec g{2, 16, 1.0};
  const auto s = midpoint_solve(stereo_lift(seeded_data(g, DataSpec{})), 0.125, 1.0 / 64, 1e-12);
  const auto rep = gronwall_diagnostic(s, s);
  EXPECT_TRUE(rep.identical);
  EXPECT_EQ(rep.max_energy, 0.0);
  EXPECT_EQ(rep.gronwall_constant, 0.0);
}

TEST(Gronwall, ShortOrMismatchedInputsRejected) {
  const GridSpec g{2, 16, 1.0};
  const auto s0 = SphereFieldd::constant(g, 0, 0, 1);
  const auto a = midpoint_solve(s0, 3.0 / 64, 1.0 / 64, 1e-12);
  EXPECT_THROW(gronwall_diagnostic(a, a), DegenerateInput);
  const auto b = midpoint_solve(s0, 0.125, 1.0 / 64, 1e-12);
  EXPECT_THROW(gronwall_diagnostic(a, b), GridMismatch);
}

TEST(Gronwall, PerturbedPairsGiveStableConstant) {
  const auto study = run_gronwall(small_config(), 1e-3, {1e-4, 1e-5});
  EXPECT_TRUE(study.identical_flag);
  ASSERT_EQ(study.constants.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(std::isfinite(study.constants[i]));
    EXPECT_TRUE(study.bounded[i]);
  }
  EXPECT_LE(study.spread, 2.0);
}

TEST(Gronwall, SameDataDifferentStepsShrinksUnderRefinement) {
  // q(0) = 0; the difference of two discretizations is pure discretization
  // error and falls like dt^4 in E against a fine reference.
  const GridSpec g{2, 32, 2.0};
  const auto s0 = stereo_lift(seeded_data(g, DataSpec{DataKind::gaussian_bump, 0.2, 1.6, 1.0, 0}));
  const double T = 0.25, coarse = 1.0 / 32;
  const auto reference = midpoint_solve(s0, T, coarse / 8, 1e-13);
  auto subsample = [&](const SphereTrajectory<double>& s, int every) {
    SphereTrajectory<double> out(g, coarse);
    for (int m = 0; m < s.size(); m += every) out.push_back(s[m]);
    return out;
  };
  const auto ref = subsample(reference, 8);
  double energy[2];
  for (int level = 0; level < 2; ++level) {
    const auto s = midpoint_solve(s0, T, coarse / (1 << level), 1e-13);
    const auto rep = gronwall_diagnostic(ref, subsample(s, 1 << level));
    EXPECT_EQ(rep.energy[0], 0.0);
    energy[level] = rep.max_energy;
  }
  EXPECT_GT(energy[0] / energy[1], 8.0) << energy[0] << " -> " << energy[1];
}

TEST(Lipschitz, RatioStableAcrossPerturbationSizes) {
  for (double a : {1e-2, 0.5}) {
    const auto study = run_lipschitz(small_config(), a, {1e-3, 1e-4, 1e-5}, {0.0});
    for (double r : study.ratios[0]) EXPECT_TRUE(std::isfinite(r));
    EXPECT_LE(study.spreads[0], 2.0) << "amplitude " << a;
  }
}
