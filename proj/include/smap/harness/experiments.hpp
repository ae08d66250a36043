#pragma once

#include <string>
#include <vector>

#include "smap/harness/config.hpp"
#include "smap/harness/seeded_data.hpp"
#include "smap/solver.hpp"
#include "smap/spacetime.hpp"

namespace smap::harness {

DataSpec data_spec(const ExperimentConfig& cfg, double amplitude, std::uint64_t seed_offset = 0);
PicardSettings<double> picard_settings(const ExperimentConfig& cfg);
DirectionSet direction_set(const ExperimentConfig& cfg, int d);

/// sup_m ||u(t_m)||_{H^sigma}.
double sup_sobolev(const ChartTrajectory<double>& u, double sigma);
/// sup_m ||u(t_m) - v(t_m)||_{H^sigma}.
double sup_sobolev_distance(const ChartTrajectory<double>& u, const ChartTrajectory<double>& v, double sigma);
/// sup_m d^sigma(lift(u(t_m)), s(t_m)).
double sup_sphere_distance(const ChartTrajectory<double>& u, const SphereTrajectory<double>& s, double sigma);
/// Exact free evolution sampled on [0, T].
ChartTrajectory<double> free_trajectory(const ComplexFieldd& phi, double T, double dt);

// ---------------------------------------------------------------------------

struct ContractionRun {
  double amplitude = 0;
  PicardHistory history;
  bool converged = false;
  std::string error;          ///< error name when picard_solve threw
  double worst_ratio = 0;     ///< max ratio over n >= 1
  double residual = 0;        ///< sup ||u - duhamel_map(phi, u)|| / ||phi||
};

/// Picard iteration at one amplitude; numeric errors are recorded, not thrown.
ContractionRun run_contraction(const ExperimentConfig& cfg, double amplitude, bool with_residual = false);

struct CompareLevel {
  int n = 0;
  double dt = 0;
  double distance = 0;    ///< sup_t H^1 distance, lifted chart vs midpoint
  double max_defect = 0;  ///< midpoint raw | |s| - 1 |
};

struct CompareStudy {
  std::vector<CompareLevel> levels;
  std::vector<double> orders;  ///< log2 ratio between consecutive levels
};

/// Chart route vs sphere route from identical sphere data at levels
/// (n 2^i, dt 2^{-i}), i < levels.
CompareStudy run_compare(const ExperimentConfig& cfg, double amplitude, int levels = 2);

struct GronwallStudy {
  double identical_max_energy = 0;
  bool identical_flag = false;
  std::vector<double> sizes;
  std::vector<double> constants;
  std::vector<double> max_energy;
  std::vector<bool> bounded;  ///< E(t) <= E(0) e^{C_s t} (relative slack 1e-9)
  double spread = 0;          ///< max/min of constants
};

/// Same data at two inner tolerances, then perturbed pairs of the given absolute sizes.
GronwallStudy run_gronwall(const ExperimentConfig& cfg, double amplitude, const std::vector<double>& sizes);

struct LipschitzStudy {
  std::vector<double> sizes;  ///< relative to the amplitude
  std::vector<double> sigma_offsets;
  std::vector<std::vector<double>> ratios;  ///< [offset][size]
  std::vector<double> spreads;              ///< per offset
};

LipschitzStudy run_lipschitz(const ExperimentConfig& cfg, double amplitude, const std::vector<double>& sizes,
                             const std::vector<double>& sigma_offsets);

struct LinearEstimateStudy {
  std::vector<double> sigmas;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> ratios;  ///< [sigma][member] fsigma_upper / ||phi||_{H^sigma}
  double spread = 0;                        ///< max/min over all entries
};

LinearEstimateStudy run_linear_estimate(const ExperimentConfig& cfg, const std::vector<double>& sigmas, int members);

struct LemmaStudy {
  LemmaResult result;
  std::vector<std::string> ids;
  double slope_r2 = 0, slope_r3 = 0, slope_r4 = 0;
  bool all_finite = true;
  int members = 0;
};

/// Windowed single-mode and band-limited free evolutions plus Picard
/// solutions on the lemma grid, ratio statistics for shells k_lo..k_hi.
LemmaStudy run_lemma_study(const ExperimentConfig& cfg);

struct CheckResult {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
  std::string detail;
};

/// Invariant suite behind `smap verify`.
std::vector<CheckResult> run_verify_suite(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// CLI commands: each writes into <out>/<command>/ and returns normally or
// throws (ConfigError, ValidationFailure, numeric errors).

struct CommandContext {
  ExperimentConfig cfg;
  std::string out_dir;
};

void command_evolve(const CommandContext& ctx);
void command_picard(const CommandContext& ctx);
void command_norms(const CommandContext& ctx);
void command_verify(const CommandContext& ctx);
void command_compare(const CommandContext& ctx);

}  // namespace smap::harness
