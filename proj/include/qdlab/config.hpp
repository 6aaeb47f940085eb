#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdlab/infometrics.hpp"
#include "qdlab/model.hpp"
#include "qdlab/search.hpp"

namespace qdlab {

enum class Experiment { Evolution, MISweep, InfoDecomposition, SBSSweep };
enum class OutputFormat { CSV, JSON };

std::string to_string(Experiment experiment);
std::string to_string(OutputFormat format);
std::string to_string(EnvInit env);

/// Fully resolved run description: model knobs, experiment recipe, fragment
/// trace methods, snapshot times, search budget and output routing.
struct ExperimentConfig {
  ModelParams params;
  Experiment experiment = Experiment::Evolution;
  std::vector<TraceMethod> trace_methods{TraceMethod::Perez, TraceMethod::Staircase};
  std::vector<double> times;
  SystemSource system_source = SystemSource::TrueSystem;
  SearchBudget search;
  int fragment_samples = 500;  // subset sample count once N >= 16
  std::string output;          // defaults to "<experiment>.csv" / ".json"
  OutputFormat format = OutputFormat::CSV;
  int jobs = 0;  // 0 = hardware concurrency
  int ensemble = 1;
  double tolerance = kDefaultTolerance;

  /// Fills experiment-dependent defaults (time grid, output name).
  void apply_defaults();

  /// Throws config_error on inconsistent values.
  void validate() const;

  /// Validation tolerance for states at time t: late snapshots accumulate
  /// phase error, so the bar is relaxed to 1e-8 from t = 500 on.
  double tolerance_at(double t) const;
};

/// Optional overrides collected from command-line flags; unset fields leave
/// the file/default value in place. A flag that overrides a value that was
/// explicitly set in the config file wins, with a warning on stderr.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> n_levels;
  std::optional<double> lambda;
  std::optional<double> beta;
  std::optional<std::string> env_init;
  std::optional<std::string> trace;
  std::optional<std::string> times;
  std::optional<std::string> system_source;
  std::optional<int> search_samples;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<int> jobs;
  std::optional<int> ensemble;
};

/// Parses "key = value" lines (UTF-8, '#' comments). Unknown keys and
/// malformed values raise config_error with line context.
ExperimentConfig load_config(Experiment experiment, const std::string& path,
                             const ConfigOverrides& overrides);

/// Config resolution without a file (defaults + flag overrides).
ExperimentConfig make_config(Experiment experiment, const ConfigOverrides& overrides);

/// Resolved key/value view of a config, in a fixed emission order; used for
/// the output-file metadata header. Excludes runtime-only knobs (jobs,
/// output path) so reruns with different parallelism stay byte-identical.
std::vector<std::pair<std::string, std::string>> config_metadata(const ExperimentConfig& config);

/// Parses a comma-separated list of non-negative times.
std::vector<double> parse_times(const std::string& text);

}  // namespace qdlab
