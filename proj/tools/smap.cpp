#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "smap/errors.hpp"
#include "smap/harness/config.hpp"
#include "smap/harness/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kValidationFailure = 3;
constexpr int kNumericError = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace smap::harness;
  CLI::App app{"Schrodinger map simulator and verification harness"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool allow_subcritical = false;

  const std::map<std::string, void (*)(const CommandContext&)> commands{
      {"evolve", command_evolve},   {"picard", command_picard},   {"norms", command_norms},
      {"verify", command_verify},   {"compare", command_compare},
  };
  const std::map<std::string, std::string> help{
      {"evolve", "midpoint sphere trajectory and snapshots"},
      {"picard", "Picard iteration with history CSV"},
      {"norms", "space-time norm and lemma-ratio reports"},
      {"verify", "invariant suite with pass/fail summary"},
      {"compare", "chart vs sphere cross-validation table"},
  };
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "key = value config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config 'output')");
    sub->add_option("--seed", seed, "RNG seed (overrides config 'seed')");
    sub->add_flag("--allow-subcritical", allow_subcritical, "permit sigma0 <= (d+1)/2");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    CommandContext ctx{load_config(config_path, allow_subcritical), {}};
    if (seed) ctx.cfg.seed = *seed;
    ctx.out_dir = out_dir.empty() ? ctx.cfg.output : out_dir;
    commands.at(command)(ctx);
  } catch (const smap::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const smap::ValidationFailure& e) {
    std::cerr << e.what() << "\n";
    return kValidationFailure;
  } catch (const smap::Error& e) {
    std::cerr << "error " << e.name() << ": " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
