#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smap/grid.hpp"
#include "smap/nonlinearity.hpp"

namespace smap::harness {

enum class DataKind { gaussian_bump, mode_sum, random_bandlimited };

std::string to_string(DataKind kind);

struct ExperimentConfig {
  // dynamics
  int d = 2;
  int n = 64;
  double period = 2.0;
  double T = 0.5;
  double dt = 1.0 / 256.0;
  double sigma0 = 1.6;
  DataKind data = DataKind::gaussian_bump;
  double width = 1.0;  ///< gaussian_bump width in x
  std::vector<double> amplitudes{1e-3};
  std::vector<double> perturbations{1e-3, 1e-4, 1e-5};
  double tol = 1e-10;
  int max_iter = 40;
  double smallness = 1e-2;  ///< advisory bound on ||phi||_{H^sigma0}
  DealiasPolicy dealias{};
  double inner_tol = 1e-12;
  int snapshot_every = 32;

  // space-time diagnostics
  std::string directions = "lattice";  ///< lattice | axes
  double window = 1.0;
  int time_samples = 64;
  int lemma_n = 128;
  double lemma_period = 1.0;
  int ensemble_size = 20;
  int k_lo = 2;
  int k_hi = 6;

  std::uint64_t seed = 0;
  std::string output = "out";
  bool allow_subcritical = false;

  GridSpec grid() const { return GridSpec{d, n, period}; }
  GridSpec lemma_grid() const { return GridSpec{d, lemma_n, lemma_period}; }
  double critical_sigma() const { return (d + 1) / 2.0; }
  bool subcritical() const { return sigma0 <= critical_sigma(); }

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& text, bool allow_subcritical = false);
ExperimentConfig load_config(const std::string& path, bool allow_subcritical = false);

/// Canonical key = value rendering (round-trips through parse_config).
std::string render_config(const ExperimentConfig& cfg);

}  // namespace smap::harness
