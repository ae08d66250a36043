#include "smap/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "smap/harness/csv.hpp"
#include "smap/harness/parallel.hpp"
#include "smap/harness/snapshot.hpp"

namespace smap::harness {

namespace fs = std::filesystem;

DataSpec data_spec(const ExperimentConfig& cfg, double amplitude, std::uint64_t seed_offset) {
  return DataSpec{cfg.data, amplitude, cfg.sigma0, cfg.width, cfg.seed + seed_offset};
}

PicardSettings<double> picard_settings(const ExperimentConfig& cfg) {
  return PicardSettings<double>{cfg.sigma0, cfg.dt, cfg.dealias};
}

DirectionSet direction_set(const ExperimentConfig& cfg, int d) {
  DirectionSet all = DirectionSet::lattice(d);
  if (cfg.directions == "lattice") return all;
  DirectionSet axes;
  for (const auto& e : all.directions)
    if (std::count_if(e.begin(), e.end(), [](double c) { return c != 0.0; }) == 1) axes.directions.push_back(e);
  return axes;
}

double sup_sobolev(const ChartTrajectory<double>& u, double sigma) {
  double best = 0;
  for (const auto& f : u) best = std::max(best, sobolev_norm(f, sigma));
  return best;
}

double sup_sobolev_distance(const ChartTrajectory<double>& u, const ChartTrajectory<double>& v, double sigma) {
  if (u.size() != v.size()) throw GridMismatch("trajectories have different lengths");
  double best = 0;
  for (int m = 0; m < u.size(); ++m) {
    ComplexFieldd diff(u.grid(), to_physical(u[m]).values() - to_physical(v[m]).values(), Representation::physical);
    best = std::max(best, sobolev_norm(diff, sigma));
  }
  return best;
}

double sup_sphere_distance(const ChartTrajectory<double>& u, const SphereTrajectory<double>& s, double sigma) {
  if (u.size() != s.size()) throw GridMismatch("trajectories have different lengths");
  double best = 0;
  for (int m = 0; m < u.size(); ++m) best = std::max(best, sobolev_distance(stereo_lift(u[m]), s[m], sigma));
  return best;
}

ChartTrajectory<double> free_trajectory(const ComplexFieldd& phi, double T, double dt) {
  ChartTrajectory<double> traj(phi.grid(), dt);
  const int steps = step_count(T, dt);
  ComplexFieldd start = to_physical(phi);
  start.set_time(0.0);
  for (int m = 0; m <= steps; ++m) traj.push_back(free_propagate(start, traj.time(m)));
  return traj;
}

// ---------------------------------------------------------------------------

ContractionRun run_contraction(const ExperimentConfig& cfg, double amplitude, bool with_residual) {
  ContractionRun run;
  run.amplitude = amplitude;
  const ComplexFieldd phi = seeded_data(cfg.grid(), data_spec(cfg, amplitude));
  try {
    auto [u, history] = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, picard_settings(cfg));
    run.history = std::move(history);
    run.converged = true;
    if (with_residual && run.history.data_norm > 0) {
      const auto again = duhamel_map(phi, u, cfg.dealias);
      run.residual = sup_sobolev_distance(u, again, cfg.sigma0) / run.history.data_norm;
    }
  } catch (const NoContraction& e) {
    run.error = e.name();
  } catch (const MaxIterExceeded& e) {
    run.error = e.name();
  }
  for (const auto& r : run.history.records) run.worst_ratio = std::max(run.worst_ratio, r.ratio);
  return run;
}

CompareStudy run_compare(const ExperimentConfig& cfg, double amplitude, int levels) {
  CompareStudy study;
  for (int i = 0; i < levels; ++i) {
    const GridSpec grid{cfg.d, cfg.n << i, cfg.period};
    const double dt = cfg.dt / (1 << i);
    const SphereFieldd s0 = seeded_sphere(grid, data_spec(cfg, amplitude));
    const ComplexFieldd phi = stereo_project(s0);
    PicardSettings<double> settings = picard_settings(cfg);
    settings.dt = dt;
    const auto u = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, settings).first;
    const auto s = midpoint_solve(s0, cfg.T, dt, cfg.inner_tol);
    CompareLevel level{grid.n, dt, sup_sphere_distance(u, s, 1.0), 0.0};
    for (const auto& f : s) level.max_defect = std::max(level.max_defect, f.normalization_defect());
    study.levels.push_back(level);
  }
  for (int i = 1; i < levels; ++i)
    study.orders.push_back(std::log2(study.levels[i - 1].distance / study.levels[i].distance));
  return study;
}

namespace {

/// Unit-H^sigma0 smooth perturbation direction, independent of the data seed.
ComplexFieldd perturbation_direction(const ExperimentConfig& cfg) {
  DataSpec spec{DataKind::random_bandlimited, 1.0, cfg.sigma0, cfg.width, cfg.seed + 7919};
  return seeded_data(cfg.grid(), spec);
}

double spread_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

}  // namespace

GronwallStudy run_gronwall(const ExperimentConfig& cfg, double amplitude, const std::vector<double>& sizes) {
  GronwallStudy study;
  const GridSpec grid = cfg.grid();
  const ComplexFieldd phi = seeded_data(grid, data_spec(cfg, amplitude));
  const SphereFieldd s0 = stereo_lift(phi);
  const auto base = midpoint_solve(s0, cfg.T, cfg.dt, cfg.inner_tol);
  const auto tighter = midpoint_solve(s0, cfg.T, cfg.dt, cfg.inner_tol * 0.1);
  const auto same = gronwall_diagnostic(base, tighter);
  study.identical_max_energy = same.max_energy;
  study.identical_flag = same.identical;

  const ComplexFieldd dir = perturbation_direction(cfg);
  study.sizes = sizes;
  study.constants.resize(sizes.size());
  study.max_energy.resize(sizes.size());
  study.bounded.resize(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    ComplexFieldd moved(grid, phi.values() + sizes[i] * dir.values(), Representation::physical);
    const auto other = midpoint_solve(stereo_lift(moved), cfg.T, cfg.dt, cfg.inner_tol);
    const auto rep = gronwall_diagnostic(base, other);
    study.constants[i] = rep.gronwall_constant;
    study.max_energy[i] = rep.max_energy;
    bool ok = true;
    for (std::size_t m = 0; m < rep.times.size(); ++m)
      ok = ok && rep.energy[m] <= rep.energy[0] * std::exp(rep.gronwall_constant * rep.times[m]) * (1 + 1e-9);
    study.bounded[i] = ok;
  });
  study.spread = spread_of(study.constants);
  return study;
}

LipschitzStudy run_lipschitz(const ExperimentConfig& cfg, double amplitude, const std::vector<double>& sizes,
                             const std::vector<double>& sigma_offsets) {
  LipschitzStudy study;
  study.sizes = sizes;
  study.sigma_offsets = sigma_offsets;
  const GridSpec grid = cfg.grid();
  const ComplexFieldd phi = seeded_data(grid, data_spec(cfg, amplitude));
  const ComplexFieldd dir = perturbation_direction(cfg);
  const auto settings = picard_settings(cfg);
  const auto base = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, settings).first;

  std::vector<ChartTrajectory<double>> moved(sizes.size());
  std::vector<ComplexFieldd> data(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    data[i] = ComplexFieldd(grid, phi.values() + sizes[i] * amplitude * dir.values(), Representation::physical);
    moved[i] = picard_solve(data[i], cfg.T, cfg.tol, cfg.max_iter, settings).first;
  });
  for (double off : sigma_offsets) {
    const double sigma = cfg.sigma0 + off;
    std::vector<double> row;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      ComplexFieldd diff(grid, data[i].values() - phi.values(), Representation::physical);
      row.push_back(sup_sobolev_distance(base, moved[i], sigma) / sobolev_norm(diff, sigma));
    }
    study.spreads.push_back(spread_of(row));
    study.ratios.push_back(std::move(row));
  }
  return study;
}

LinearEstimateStudy run_linear_estimate(const ExperimentConfig& cfg, const std::vector<double>& sigmas,
                                        int members) {
  LinearEstimateStudy study;
  study.sigmas = sigmas;
  const GridSpec grid = cfg.grid();
  for (int i = 0; i < members; ++i) study.seeds.push_back(cfg.seed + 100 + static_cast<std::uint64_t>(i));
  std::vector<std::vector<double>> per_member(members);
  parallel_for(static_cast<std::size_t>(members), [&](std::size_t i) {
    DataSpec spec{DataKind::random_bandlimited, 1.0, cfg.sigma0, cfg.width, study.seeds[i]};
    const ComplexFieldd phi = seeded_data(grid, spec);
    const auto F = spacetime_transform(free_trajectory(phi, cfg.T, cfg.dt), cfg.window, cfg.time_samples);
    for (double s : sigmas) per_member[i].push_back(fsigma_upper(F, s) / sobolev_norm(phi, s));
  });
  std::vector<double> all;
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    std::vector<double> row;
    for (int i = 0; i < members; ++i) row.push_back(per_member[i][s]);
    all.insert(all.end(), row.begin(), row.end());
    study.ratios.push_back(std::move(row));
  }
  study.spread = spread_of(all);
  return study;
}

namespace {

ComplexFieldd plane_wave(const GridSpec& grid, const std::vector<int>& modes) {
  ComplexFieldd f(grid, Representation::frequency);
  std::size_t flat = 0;
  for (int a = 0; a < grid.d; ++a) flat = flat * grid.n + static_cast<std::size_t>((modes[a] + grid.n) % grid.n);
  f.values()(static_cast<Eigen::Index>(flat)) = 1.0;
  return to_physical(f);
}

}  // namespace

LemmaStudy run_lemma_study(const ExperimentConfig& cfg) {
  const GridSpec grid = cfg.lemma_grid();
  const int shells = cfg.k_hi - cfg.k_lo + 1;
  const int count = cfg.ensemble_size;
  LemmaStudy study;
  study.members = count;
  std::vector<SpaceTimeSpectrum<double>> ensemble(static_cast<std::size_t>(count));
  study.ids.resize(static_cast<std::size_t>(count));

  // Member i: i % 4 in {0, 1} a single mode at |xi| ~ 2^k along an axis
  // (0) or a diagonal (1); 2 a band-limited free evolution; 3 a Picard solution.
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    const int slot = static_cast<int>(i / 4);
    ChartTrajectory<double> traj;
    std::ostringstream id;
    switch (i % 4) {
      case 0:
      case 1: {
        const int k = cfg.k_lo + (static_cast<int>(i / 2) % shells);
        const double radius = std::ldexp(1.0, k) * grid.period;
        std::vector<int> modes(grid.d, 0);
        if (i % 4 == 0 || grid.d < 2) {
          modes[0] = std::min(static_cast<int>(std::lround(radius)), grid.n / 2 - 1);
          id << "mode_axis_k" << k;
        } else {
          const int m = std::min(static_cast<int>(std::lround(radius / std::sqrt(2.0))), grid.n / 2 - 1);
          modes[0] = m;
          modes[1] = m;
          id << "mode_diag_k" << k;
        }
        traj = free_trajectory(plane_wave(grid, modes), cfg.T, cfg.dt);
        break;
      }
      case 2: {
        DataSpec spec{DataKind::random_bandlimited, 1.0, cfg.sigma0, cfg.width, cfg.seed + 200 + i};
        traj = free_trajectory(seeded_data(grid, spec), cfg.T, cfg.dt);
        id << "free_random_" << slot;
        break;
      }
      default: {
        // Narrow bumps reach the upper shells; amplitudes stay in the contraction regime.
        DataSpec spec{DataKind::gaussian_bump, 1e-3, cfg.sigma0, 0.08 + 0.04 * slot, cfg.seed};
        const ComplexFieldd phi = seeded_data(grid, spec);
        PicardSettings<double> settings = picard_settings(cfg);
        traj = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, settings).first;
        id << "picard_bump_" << slot;
        break;
      }
    }
    ensemble[i] = spacetime_transform(traj, cfg.window, cfg.time_samples);
    study.ids[i] = id.str();
  });

  study.result = lemma_diagnostics(ensemble, study.ids, direction_set(cfg, grid.d), cfg.k_lo, cfg.k_hi);
  const auto& mx = study.result.maxima;
  for (const auto* v : {&mx.r2, &mx.r3, &mx.r4})
    for (double x : *v) study.all_finite = study.all_finite && std::isfinite(x);
  for (const auto& row : study.result.report.rows)
    study.all_finite = study.all_finite && std::isfinite(row.value);
  study.slope_r2 = log2_slope(mx.shells, mx.r2);
  study.slope_r3 = log2_slope(mx.shells, mx.r3);
  study.slope_r4 = log2_slope(mx.shells, mx.r4);
  return study;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> run_verify_suite(const ExperimentConfig& cfg) {
  std::vector<CheckResult> out;
  auto at_most = [&](std::string name, double value, double threshold, std::string detail = {}) {
    out.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold, std::move(detail)});
  };
  const GridSpec grid = cfg.grid();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  auto random_field = [&] {
    ComplexValues<double> v(static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {normal(rng), normal(rng)};
    return ComplexFieldd(grid, std::move(v), Representation::physical);
  };
  auto max_diff = [](const ComplexFieldd& a, const ComplexFieldd& b) {
    return (to_physical(a).values() - to_physical(b).values()).abs().maxCoeff();
  };

  {
    const auto u = random_field();
    const auto uh = to_frequency(u);
    at_most("plancherel", std::abs(uh.l2_norm() - u.l2_norm()) / u.l2_norm(), 1e-12);
    at_most("transform_roundtrip", max_diff(to_physical(uh), u), 1e-13);
    const auto w = free_propagate(free_propagate(u, 0.2), 0.3);
    at_most("free_group_law", max_diff(w, free_propagate(u, 0.5)), 1e-12);
    at_most("multiplier_commute",
            max_diff(apply_jsigma(lp_project(u, 2), 1.3), lp_project(apply_jsigma(u, 1.3), 2)) /
                u.values().abs().maxCoeff(),
            1e-12);
  }
  {
    double worst = 0;
    std::uniform_real_distribution<double> radius(0.0, std::ldexp(1.25, 10));
    for (int i = 0; i < 1000; ++i) {
      const double r = radius(rng);
      double sum = 0;
      for (int k = 0; k <= 10; ++k) sum += eta_shell(k, r);
      worst = std::max(worst, std::abs(sum - 1));
    }
    at_most("partition_of_unity", worst, 1e-12);
  }
  {
    const ComplexFieldd g = seeded_data(grid, {DataKind::random_bandlimited, 0.5, cfg.sigma0, cfg.width, cfg.seed});
    at_most("stereo_roundtrip", max_diff(stereo_project(stereo_lift(g)), g), 1e-12);
    const SphereFieldd s = stereo_lift(g);
    const auto rhs = cross_rhs(s);
    at_most("cross_rhs_tangency", (s.values() * rhs).rowwise().sum().abs().maxCoeff(), 1e-13);
  }
  {
    // Cubic leading order of the nonlinearity.
    const ComplexFieldd g = seeded_data(grid, {DataKind::gaussian_bump, 1.0, cfg.sigma0, cfg.width, cfg.seed});
    std::vector<double> scaled;
    for (double eps : {1e-3, 1e-2}) {
      ComplexFieldd small(grid, eps * g.values(), Representation::physical);
      scaled.push_back(nonlinearity(small, cfg.dealias).l2_norm() / (eps * eps * eps));
    }
    at_most("nonlinearity_cubic_scaling", std::abs(scaled[1] / scaled[0] - 1), 1e-2);
  }
  for (double a : cfg.amplitudes) {
    if (a > cfg.smallness) continue;
    const auto run = run_contraction(cfg, a, true);
    std::ostringstream name;
    name << "picard_contraction_a" << a;
    at_most(name.str(), run.converged ? run.worst_ratio : std::numeric_limits<double>::infinity(), 0.5,
            run.converged ? std::to_string(run.history.records.size()) + " iterations" : run.error);
    name.str("");
    name << "picard_fixed_point_residual_a" << a;
    at_most(name.str(), run.residual, 2 * cfg.tol);
  }
  {
    const SphereFieldd s0 = seeded_sphere(grid, data_spec(cfg, cfg.amplitudes.front()));
    const auto s = midpoint_solve(s0, cfg.T, cfg.dt, cfg.inner_tol);
    double defect = 0;
    for (const auto& f : s) defect = std::max(defect, f.normalization_defect());
    at_most("midpoint_sphere_constraint", defect, 10 * cfg.inner_tol);

    const auto path = (fs::temp_directory_path() / ("smap_verify_" + std::to_string(cfg.seed) + ".bin")).string();
    write_snapshot(path, s[s.size() - 1]);
    const auto back = std::get<SphereFieldd>(read_snapshot(path));
    fs::remove(path);
    at_most("snapshot_roundtrip", (back.values() - s[s.size() - 1].values()).abs().maxCoeff(), 0.0);
  }
  {
    const ComplexFieldd phi = seeded_data(grid, {DataKind::random_bandlimited, 1.0, cfg.sigma0, cfg.width, cfg.seed});
    const auto F = spacetime_transform(free_trajectory(phi, cfg.T, cfg.dt), cfg.window, cfg.time_samples);
    const auto samples = to_samples(F);
    const double direct = std::sqrt(samples.values.abs2().sum() * grid.cell_volume() * samples.dt);
    at_most("spacetime_plancherel", std::abs(F.l2_norm() - direct) / direct, 1e-12);
    double fubini = 0;
    for (const auto& e : direction_set(cfg, grid.d).directions)
      fubini = std::max(fubini, std::abs(lpq_norm(samples, e, 2.0, 2.0) - direct) / direct);
    at_most("lpq_fubini", fubini, 1e-12);
    at_most("xk_empty_shell", xk_norm(mask_region(F, 1), grid.k_max() + 2), 0.0);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

fs::path command_dir(const CommandContext& ctx, const char* name) {
  const fs::path dir = fs::path(ctx.out_dir) / name;
  fs::create_directories(dir);
  return dir;
}

std::string comment(const ExperimentConfig& cfg, const char* command) {
  std::ostringstream s;
  s << "smap " << command << " d=" << cfg.d << " n=" << cfg.n << " period=" << cfg.period << " T=" << cfg.T
    << " dt=" << cfg.dt << " sigma0=" << cfg.sigma0 << " seed=" << cfg.seed
    << (cfg.subcritical() ? " SUBCRITICAL" : "");
  return s.str();
}

void warn_smallness(const ExperimentConfig& cfg) {
  for (double a : cfg.amplitudes)
    if (a > cfg.smallness)
      std::cerr << "warning: amplitude " << a << " exceeds the configured smallness " << cfg.smallness << "\n";
  if (cfg.subcritical()) std::cerr << "warning: sigma0 <= (d+1)/2, results are outside the theorem's range\n";
}

}  // namespace

void command_evolve(const CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  warn_smallness(cfg);
  const fs::path dir = command_dir(ctx, "evolve");
  CsvWriter csv((dir / "evolve.csv").string(),
                {"amplitude", "step", "time", "normalization_defect", "distance_from_pole_h1"}, comment(cfg, "evolve"));
  for (std::size_t a = 0; a < cfg.amplitudes.size(); ++a) {
    const SphereFieldd s0 = seeded_sphere(cfg.grid(), data_spec(cfg, cfg.amplitudes[a]));
    const auto s = midpoint_solve(s0, cfg.T, cfg.dt, cfg.inner_tol);
    const SphereFieldd pole = SphereFieldd::constant(cfg.grid(), 0, 0, 1);
    for (int m = 0; m < s.size(); ++m) {
      csv.cell(cfg.amplitudes[a]).cell(m).cell(s.time(m)).cell(s[m].normalization_defect());
      csv.cell(sobolev_distance(s[m], pole, 1.0));
      csv.end_row();
      if (m % cfg.snapshot_every == 0 || m == s.size() - 1) {
        std::ostringstream name;
        name << "sphere_a" << a << "_step" << m << ".bin";
        write_snapshot((dir / name.str()).string(), s[m]);
      }
    }
  }
}

void command_picard(const CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  warn_smallness(cfg);
  const fs::path dir = command_dir(ctx, "picard");
  CsvWriter csv((dir / "picard_history.csv").string(),
                {"amplitude", "data_norm", "n", "sup_norm", "delta", "ratio"}, comment(cfg, "picard"));
  for (std::size_t a = 0; a < cfg.amplitudes.size(); ++a) {
    const ComplexFieldd phi = seeded_data(cfg.grid(), data_spec(cfg, cfg.amplitudes[a]));
    const auto [u, history] = picard_solve(phi, cfg.T, cfg.tol, cfg.max_iter, picard_settings(cfg));
    for (const auto& r : history.records) {
      csv.cell(cfg.amplitudes[a]).cell(history.data_norm).cell(r.n).cell(r.norm).cell(r.delta).cell(r.ratio);
      csv.end_row();
    }
    std::ostringstream name;
    name << "chart_a" << a << "_final.bin";
    write_snapshot((dir / name.str()).string(), u[u.size() - 1]);
  }
}

void command_norms(const CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const fs::path dir = command_dir(ctx, "norms");
  const LemmaStudy study = run_lemma_study(cfg);
  {
    CsvWriter csv((dir / "norm_report.csv").string(), {"trajectory_id", "k", "quantity", "direction", "value"},
                  comment(cfg, "norms"));
    for (const auto& r : study.result.report.rows) {
      csv.cell(r.trajectory_id).cell(r.k).cell(r.quantity).cell(r.direction).cell(r.value);
      csv.end_row();
    }
    for (const auto& f : study.result.report.flags) std::cerr << "note: " << f << "\n";
  }
  {
    CsvWriter csv((dir / "lemma_maxima.csv").string(), {"k", "R1", "R2", "R3", "R4"}, comment(cfg, "norms"));
    const auto& mx = study.result.maxima;
    for (std::size_t i = 0; i < mx.shells.size(); ++i) {
      csv.cell(mx.shells[i]).cell(mx.r1[i]).cell(mx.r2[i]).cell(mx.r3[i]).cell(mx.r4[i]);
      csv.end_row();
    }
  }
  {
    CsvWriter csv((dir / "lemma_slopes.csv").string(), {"quantity", "slope"}, comment(cfg, "norms"));
    csv.cell("R2").cell(study.slope_r2).end_row();
    csv.cell("R3").cell(study.slope_r3).end_row();
    csv.cell("R4").cell(study.slope_r4).end_row();
  }
  {
    const auto lin = run_linear_estimate(cfg, {cfg.sigma0, cfg.sigma0 + 1.0}, 10);
    CsvWriter csv((dir / "linear_estimate.csv").string(), {"seed", "sigma", "fsigma_over_hsigma"},
                  comment(cfg, "norms"));
    for (std::size_t s = 0; s < lin.sigmas.size(); ++s)
      for (std::size_t i = 0; i < lin.seeds.size(); ++i) {
        csv.cell(static_cast<long long>(lin.seeds[i])).cell(lin.sigmas[s]).cell(lin.ratios[s][i]);
        csv.end_row();
      }
  }
  std::cout << "R2 slope " << CsvWriter::format(study.slope_r2) << "\nR3 slope " << CsvWriter::format(study.slope_r3)
            << "\nR4 slope " << CsvWriter::format(study.slope_r4) << "\n";
}

void command_verify(const CommandContext& ctx) {
  const fs::path dir = command_dir(ctx, "verify");
  const auto checks = run_verify_suite(ctx.cfg);
  CsvWriter csv((dir / "verify_summary.csv").string(), {"check", "value", "threshold", "pass", "detail"},
                comment(ctx.cfg, "verify"));
  int failures = 0;
  for (const auto& c : checks) {
    csv.cell(c.name).cell(c.value).cell(c.threshold).cell(c.pass ? "PASS" : "FAIL").cell(c.detail);
    csv.end_row();
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << CsvWriter::format(c.value)
              << " threshold=" << CsvWriter::format(c.threshold) << (c.detail.empty() ? "" : " (" + c.detail + ")")
              << "\n";
    failures += c.pass ? 0 : 1;
  }
  if (failures) throw ValidationFailure(std::to_string(failures) + " of " + std::to_string(checks.size()) +
                                        " invariant checks failed");
}

void command_compare(const CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const fs::path dir = command_dir(ctx, "compare");
  CsvWriter csv((dir / "compare.csv").string(), {"amplitude", "n", "dt", "sup_h1_distance", "max_defect", "order"},
                comment(cfg, "compare"));
  for (double a : cfg.amplitudes) {
    const auto study = run_compare(cfg, a, 2);
    for (std::size_t i = 0; i < study.levels.size(); ++i) {
      const auto& l = study.levels[i];
      csv.cell(a).cell(l.n).cell(l.dt).cell(l.distance).cell(l.max_defect);
      csv.cell(i == 0 ? std::numeric_limits<double>::quiet_NaN() : study.orders[i - 1]);
      csv.end_row();
      std::cout << "amplitude " << a << " n " << l.n << " distance " << CsvWriter::format(l.distance) << "\n";
    }
  }
}

}  // namespace smap::harness
