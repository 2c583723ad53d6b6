#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "excursion/cli.hpp"

namespace cli = excursion::cli;

int main(int argc, char** argv) {
  CLI::App app{"Excursion probabilities of a 2-D Gaussian field with a degenerate variance corner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EXCURSION_VERSION);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;

  const std::pair<const char*, const char*> subcommands[] = {
      {"constants", "closed-form and quadrature constants for the configured model"},
      {"integrals", "variance-loss integrals against their leading terms"},
      {"pickands", "slope-extrapolated Pickands constant"},
      {"mc", "lattice Monte Carlo of p(u) against the leading-order prediction"},
      {"blocks", "block exceedance Monte Carlo against H(S1) H(S2) Psi(u)"},
      {"sweep", "regime and order of p(u) across the product exponent a"},
  };
  for (const auto& [name, help] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--workers", workers, "worker threads, 0 = all cores (overrides config)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  cli::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = cli::load_config(config_path);
    const cli::Experiment wanted = cli::parse_experiment(sub);
    if (!config_path.empty() && cfg.experiment != wanted && cfg.experiment != cli::Experiment::Constants) {
      throw cli::ConfigError("config: experiment '" + std::string(cli::to_string(cfg.experiment)) +
                             "' does not match subcommand '" + sub + "'");
    }
    cfg.experiment = wanted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitConfig;
  }
  if (seed) cfg.seed = *seed;
  if (workers) cfg.workers = *workers;
  if (out_dir) cfg.output_dir = *out_dir;

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);
  return cli::execute(cfg, std::cout, std::cerr, command_line);
}
