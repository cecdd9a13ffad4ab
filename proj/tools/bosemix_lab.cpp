// bosemix-lab: configuration-driven verification sweeps.
//
//   bosemix-lab <lr-sweep|corr-sweep|decomp-check|hartree-compare>
//               --config PATH [--out PATH] [--seed S] [--threads N]
//
// Exit codes: 0 pass, 1 violation, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "bosemix/experiments.hpp"

namespace {

using Runner = std::function<bosemix::SuiteOutput(const bosemix::ExperimentConfig&, int)>;

struct Invocation {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

int execute(const Invocation& inv, const Runner& runner) {
  bosemix::ExperimentConfig config;
  try {
    config = bosemix::load_config(inv.config_path);
    if (inv.seed) config.seed = *inv.seed;
  } catch (const bosemix::ConfigError& e) {
    std::cerr << inv.config_path << ": " << e.what() << "\n";
    return bosemix::kExitConfigError;
  }

  bosemix::SuiteOutput result;
  try {
    result = runner(config, inv.threads);
  } catch (const bosemix::ConfigError& e) {
    std::cerr << inv.config_path << ": " << e.what() << "\n";
    return bosemix::kExitConfigError;
  } catch (const bosemix::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return bosemix::kExitConfigError;
  } catch (const bosemix::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return bosemix::kExitNumericalFailure;
  }

  const std::string out_path = !inv.out_path.empty() ? inv.out_path : config.output_path;
  if (out_path.empty() || out_path == "-") {
    std::cout << result.csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << result.csv)) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return bosemix::kExitConfigError;
    }
  }
  if (!result.message.empty()) std::cerr << result.message << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-species Bose mixture verification sweeps"};
  app.set_version_flag("--version", BOSEMIX_VERSION);
  app.require_subcommand(1);

  const std::pair<const char*, Runner> suites[] = {
      {"lr-sweep", bosemix::run_lr_sweep},
      {"corr-sweep", bosemix::run_corr_sweep},
      {"decomp-check", bosemix::run_decomposition_check},
      {"hartree-compare", bosemix::run_hartree_compare},
  };
  const char* descriptions[] = {
      "Commutator norms against the commutator growth bound",
      "Correlations against the correlation growth bound",
      "Projector decomposition identity",
      "Many-body one-body density matrices against Hartree orbitals",
  };

  Invocation inv;
  std::uint64_t seed = 0;
  int status = bosemix::kExitPass;
  for (std::size_t k = 0; k < std::size(suites); ++k) {
    CLI::App* sub = app.add_subcommand(suites[k].first, descriptions[k]);
    sub->add_option("--config", inv.config_path, "INI configuration file")->required();
    sub->add_option("--out", inv.out_path, "CSV output path ('-' for stdout)");
    sub->add_option("--seed", seed, "Override run.seed");
    sub->add_option("--threads", inv.threads, "Worker threads")->check(CLI::Range(1, 1024));
    const Runner runner = suites[k].second;
    sub->callback([&inv, &seed, &status, sub, runner] {
      if (sub->count("--seed") > 0) inv.seed = seed;
      status = execute(inv, runner);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bosemix::kExitConfigError;
  }
  return status;
}
