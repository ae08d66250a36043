// Acceptance run: one PASS/FAIL line per criterion, desk-scale defaults
// (d = 2, n = 64, T = 0.5, dt = 1/256). Usage: smap_acceptance [unit-test-binary]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "smap/harness/experiments.hpp"

using namespace smap;
using namespace smap::harness;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  std::cout << "criterion " << id << " [" << title << "]: " << (pass ? "PASS" : "FAIL") << "  " << detail << "  ("
            << std::fixed << std::setprecision(1) << seconds << " s)" << std::defaultfloat << std::endl;
  if (!pass) ++failures;
}

template <typename Fn>
void criterion(int id, const std::string& title, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail += std::string(" threw ") + e.what();
    pass = false;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, title, pass, detail, secs);
}

std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;  // d=2, n=64, P=2, T=0.5, dt=1/256, sigma0=1.6, gaussian_bump width 1
  cfg.validate();

  criterion(1, "Picard contraction", [&](std::string& detail) {
    bool ok = true;
    for (double a : {1e-3, 1e-2}) {
      const auto run = run_contraction(cfg, a);
      const int iters = static_cast<int>(run.history.records.size());
      ok = ok && run.converged && run.worst_ratio <= 0.5 && iters <= 40;
      detail += "a=" + sci(a) + ": iters=" + std::to_string(iters) + " max_ratio=" + sci(run.worst_ratio) +
                (run.converged ? "" : " " + run.error) + "; ";
    }
    return ok;
  });

  criterion(2, "gauge equivalence", [&](std::string& detail) {
    const auto study = run_compare(cfg, 1e-3, 2);
    const double base = study.levels[0].distance, order = study.orders[0];
    detail = "sup_t H1 distance n=64: " + sci(base) + ", n=128: " + sci(study.levels[1].distance) +
             ", order=" + sci(order);
    return base <= 1e-5 && order >= 1.8;
  });

  criterion(3, "sphere constraint", [&](std::string& detail) {
    double worst = 0;
    for (double a : {1e-3, 1e-2}) {
      const auto s = midpoint_solve(seeded_sphere(cfg.grid(), data_spec(cfg, a)), 0.5, cfg.dt, 1e-12);
      for (const auto& f : s) worst = std::max(worst, f.normalization_defect());
    }
    detail = "max | |s| - 1 | = " + sci(worst);
    return worst <= 1e-10;
  });

  criterion(4, "uniqueness / Gronwall", [&](std::string& detail) {
    const auto study = run_gronwall(cfg, 1e-3, {1e-4, 1e-5});
    detail = "identical-data max E=" + sci(study.identical_max_energy) + ", C_s(1e-4)=" + sci(study.constants[0]) +
             ", C_s(1e-5)=" + sci(study.constants[1]) + ", spread=" + sci(study.spread);
    bool bounded = true;
    for (bool b : study.bounded) bounded = bounded && b;
    if (!bounded) detail += ", E(t) <= E(0)exp(C_s t) violated";
    return study.identical_max_energy <= 1e-18 && std::isfinite(study.spread) && study.spread <= 2.0 && bounded;
  });

  criterion(5, "Lipschitz flow", [&](std::string& detail) {
    bool ok = true;
    for (double a : {1e-2, 0.5}) {
      const auto study = run_lipschitz(cfg, a, {1e-3, 1e-4, 1e-5}, {0.0, 1.0});
      detail += "a=" + sci(a) + " ";
      for (std::size_t s = 0; s < study.sigma_offsets.size(); ++s) {
        detail += "sigma'=" + std::to_string(static_cast<int>(study.sigma_offsets[s])) + ": ratios";
        for (double r : study.ratios[s]) detail += " " + sci(r);
        detail += " spread=" + sci(study.spreads[s]) + "; ";
        ok = ok && std::isfinite(study.spreads[s]) && study.spreads[s] <= 2.0;
      }
    }
    return ok;
  });

  criterion(6, "linear estimate", [&](std::string& detail) {
    const auto study = run_linear_estimate(cfg, {1.6, 2.6}, 10);
    double lo = 1e300, hi = 0;
    for (const auto& row : study.ratios)
      for (double r : row) lo = std::min(lo, r), hi = std::max(hi, r);
    detail = "fsigma/||phi||_Hsigma in [" + sci(lo) + ", " + sci(hi) + "], spread=" + sci(study.spread);
    return std::isfinite(study.spread) && study.spread <= 3.0;
  });

  criterion(7, "lemma ratio suite", [&](std::string& detail) {
    const auto study = run_lemma_study(cfg);
    detail = std::to_string(study.members) + " members, slopes R2=" + sci(study.slope_r2) +
             " R3=" + sci(study.slope_r3) + " R4=" + sci(study.slope_r4) + (study.all_finite ? "" : ", non-finite ratio");
    auto in_band = [](double s) { return std::isfinite(s) && s >= -0.5 && s <= 0.5; };
    return study.all_finite && in_band(study.slope_r2) && in_band(study.slope_r3) && in_band(study.slope_r4);
  });

  criterion(8, "unit-test oracles", [&](std::string& detail) {
    if (argc < 2) {
      detail = "unit test binary not given";
      return false;
    }
    const std::string cmd = std::string("\"") + argv[1] + "\" --gtest_brief=1 > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    detail = std::string(argv[1]) + " exit status " + std::to_string(rc);
    return rc == 0;
  });

  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion(s) failed" : "acceptance: all passed")
            << std::endl;
  return failures ? 1 : 0;
}
