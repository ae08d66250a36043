#include "smap/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "smap/errors.hpp"

namespace smap::harness {

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::gaussian_bump: return "gaussian_bump";
    case DataKind::mode_sum: return "mode_sum";
    case DataKind::random_bandlimited: return "random_bandlimited";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  // strtod handles fractions like 1/256 poorly; accept "a/b" explicitly.
  const auto slash = v.find('/');
  if (slash != std::string::npos) return to_double(key, v.substr(0, slash)) / to_double(key, v.substr(slash + 1));
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  return x;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::string list_str(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(d >= 1, "d must be >= 1");
  need(n >= 8 && (n & (n - 1)) == 0, "n must be a power of two >= 8");
  need(lemma_n >= 8 && (lemma_n & (lemma_n - 1)) == 0, "lemma_n must be a power of two >= 8");
  need(period > 0 && lemma_period > 0, "period must be positive");
  need(T > 0 && T <= 1, "T must lie in (0, 1]");
  need(dt > 0 && dt <= T, "dt must lie in (0, T]");
  need(std::abs(std::round(T / dt) * dt - T) <= 1e-12 * T, "dt must divide T");
  need(sigma0 > 0, "sigma0 must be positive");
  for (double a : amplitudes) need(a >= 0, "amplitudes must be non-negative");
  for (double p : perturbations) need(p > 0, "perturbations must be positive");
  need(tol > 0 && max_iter > 0, "tol and max_iter must be positive");
  need(smallness > 0 && width > 0 && inner_tol > 0, "smallness, width and inner_tol must be positive");
  need(snapshot_every > 0, "snapshot_every must be positive");
  need(directions == "lattice" || directions == "axes", "directions must be 'lattice' or 'axes'");
  need(window > 0 && time_samples > 0, "window and time_samples must be positive");
  need(ensemble_size > 0, "ensemble_size must be positive");
  need(0 <= k_lo && k_lo <= k_hi, "need 0 <= k_lo <= k_hi");
  if (subcritical() && !allow_subcritical) {
    std::ostringstream msg;
    msg << "sigma0 = " << sigma0 << " is not above (d+1)/2 = " << critical_sigma()
        << "; pass --allow-subcritical to run anyway";
    throw ConfigError(msg.str());
  }
}

ExperimentConfig parse_config(const std::string& text, bool allow_subcritical) {
  ExperimentConfig c;
  c.allow_subcritical = allow_subcritical;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"d", [&](auto& k, auto& v) { c.d = to_int<int>(k, v); }},
      {"n", [&](auto& k, auto& v) { c.n = to_int<int>(k, v); }},
      {"period", [&](auto& k, auto& v) { c.period = to_double(k, v); }},
      {"T", [&](auto& k, auto& v) { c.T = to_double(k, v); }},
      {"dt", [&](auto& k, auto& v) { c.dt = to_double(k, v); }},
      {"sigma0", [&](auto& k, auto& v) { c.sigma0 = to_double(k, v); }},
      {"data",
       [&](auto& k, auto& v) {
         if (v == "gaussian_bump")
           c.data = DataKind::gaussian_bump;
         else if (v == "mode_sum")
           c.data = DataKind::mode_sum;
         else if (v == "random_bandlimited")
           c.data = DataKind::random_bandlimited;
         else
           throw ConfigError("key '" + k + "': unknown data kind '" + v + "'");
       }},
      {"width", [&](auto& k, auto& v) { c.width = to_double(k, v); }},
      {"amplitudes", [&](auto& k, auto& v) { c.amplitudes = to_list(k, v); }},
      {"perturbations", [&](auto& k, auto& v) { c.perturbations = to_list(k, v); }},
      {"tol", [&](auto& k, auto& v) { c.tol = to_double(k, v); }},
      {"max_iter", [&](auto& k, auto& v) { c.max_iter = to_int<int>(k, v); }},
      {"smallness", [&](auto& k, auto& v) { c.smallness = to_double(k, v); }},
      {"dealias",
       [&](auto& k, auto& v) {
         if (v == "two_thirds")
           c.dealias = {};
         else if (v == "none")
           c.dealias = DealiasPolicy::none();
         else
           throw ConfigError("key '" + k + "': unknown dealias rule '" + v + "'");
       }},
      {"inner_tol", [&](auto& k, auto& v) { c.inner_tol = to_double(k, v); }},
      {"snapshot_every", [&](auto& k, auto& v) { c.snapshot_every = to_int<int>(k, v); }},
      {"directions", [&](auto&, auto& v) { c.directions = v; }},
      {"window", [&](auto& k, auto& v) { c.window = to_double(k, v); }},
      {"time_samples", [&](auto& k, auto& v) { c.time_samples = to_int<int>(k, v); }},
      {"lemma_n", [&](auto& k, auto& v) { c.lemma_n = to_int<int>(k, v); }},
      {"lemma_period", [&](auto& k, auto& v) { c.lemma_period = to_double(k, v); }},
      {"ensemble_size", [&](auto& k, auto& v) { c.ensemble_size = to_int<int>(k, v); }},
      {"k_lo", [&](auto& k, auto& v) { c.k_lo = to_int<int>(k, v); }},
      {"k_hi", [&](auto& k, auto& v) { c.k_hi = to_int<int>(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"output", [&](auto&, auto& v) { c.output = v; }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    it->second(key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, bool allow_subcritical) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), allow_subcritical);
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << "d = " << c.d << "\nn = " << c.n << "\nperiod = " << c.period << "\nT = " << c.T << "\ndt = " << c.dt
    << "\nsigma0 = " << c.sigma0 << "\ndata = " << to_string(c.data) << "\nwidth = " << c.width
    << "\namplitudes = " << list_str(c.amplitudes) << "\nperturbations = " << list_str(c.perturbations)
    << "\ntol = " << c.tol << "\nmax_iter = " << c.max_iter << "\nsmallness = " << c.smallness
    << "\ndealias = " << (c.dealias.rule == DealiasPolicy::Rule::none ? "none" : "two_thirds")
    << "\ninner_tol = " << c.inner_tol << "\nsnapshot_every = " << c.snapshot_every
    << "\ndirections = " << c.directions << "\nwindow = " << c.window << "\ntime_samples = " << c.time_samples
    << "\nlemma_n = " << c.lemma_n << "\nlemma_period = " << c.lemma_period
    << "\nensemble_size = " << c.ensemble_size << "\nk_lo = " << c.k_lo << "\nk_hi = " << c.k_hi
    << "\nseed = " << c.seed << "\noutput = " << c.output << "\n";
  return s.str();
}

}  // namespace smap::harness
