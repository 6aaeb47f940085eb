#include <CLI11.hpp>
#include <iostream>

#include "qdlab/harness.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  qdlab::ConfigOverrides overrides;
};

void add_shared_flags(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines, '#' comments)");
  cmd->add_option("--seed", args.overrides.seed, "model/search seed");
  cmd->add_option("--N", args.overrides.n_levels, "environment levels");
  cmd->add_option("--lambda", args.overrides.lambda, "coupling strength");
  cmd->add_option("--beta", args.overrides.beta, "inverse temperature (thermal env)");
  cmd->add_option("--env-init", args.overrides.env_init, "superposition|thermal");
  cmd->add_option("--trace", args.overrides.trace, "perez|staircase|both");
  cmd->add_option("--times", args.overrides.times, "comma-separated snapshot times");
  cmd->add_option("--system-source", args.overrides.system_source,
                  "true|fragment: where H(S) comes from");
  cmd->add_option("--search-samples", args.overrides.search_samples,
                  "axis samples per measurement search");
  cmd->add_option("--output", args.overrides.output, "output file path");
  cmd->add_option("--format", args.overrides.format, "csv|json");
  cmd->add_option("--jobs", args.overrides.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--ensemble", args.overrides.ensemble, "coupling realizations to average");
}

int run(qdlab::Experiment experiment, const CliArgs& args) {
  const qdlab::ExperimentConfig config =
      args.config_path.empty() ? qdlab::make_config(experiment, args.overrides)
                               : qdlab::load_config(experiment, args.config_path, args.overrides);
  qdlab::run_experiment(config);
  std::cerr << "wrote " << config.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qdlab: mutual-information, information-decomposition and broadcast-structure\n"
      "sweeps for a qubit coupled to an N-level environment by a random-matrix\n"
      "interaction, under the perez and staircase environment partitionings."};
  app.require_subcommand(1);

  CliArgs args;
  qdlab::Experiment experiment = qdlab::Experiment::Evolution;

  CLI::App* evolve = app.add_subcommand(
      "evolve", "time series of H(S), excited population and coherence");
  CLI::App* mi = app.add_subcommand(
      "mi-sweep", "mean mutual information over fragments of each size");
  CLI::App* decomp = app.add_subcommand(
      "info-decomp", "mutual information split into accessible part and discord");
  CLI::App* sbs = app.add_subcommand(
      "sbs-sweep", "distance bound to the nearest broadcast-structure state");
  for (CLI::App* cmd : {evolve, mi, decomp, sbs}) add_shared_flags(cmd, args);
  evolve->callback([&] { experiment = qdlab::Experiment::Evolution; });
  mi->callback([&] { experiment = qdlab::Experiment::MISweep; });
  decomp->callback([&] { experiment = qdlab::Experiment::InfoDecomposition; });
  sbs->callback([&] { experiment = qdlab::Experiment::SBSSweep; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(experiment, args);
  } catch (const qdlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qdlab::validation_error& e) {
    std::cerr << "numerical validation error: " << e.what() << "\n";
    return 3;
  } catch (const qdlab::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
