#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdlab/config.hpp"

namespace qdlab {

/// One (value_name, value) observation in the long-format output. Fields
/// that do not apply to an experiment (fragment columns for the evolution
/// series) stay empty.
struct SweepRow {
  std::string experiment;
  std::string method;  // "perez", "staircase" or "" for evolution
  std::string env_init;
  double t = 0.0;
  std::optional<double> fraction;
  std::optional<int> k;
  std::optional<long long> n_fragments;
  std::string value_name;
  double value = 0.0;
};

/// Runs `body(i)` for i in [0, count) on up to `jobs` threads (0 = all
/// hardware threads). Any exception is rethrown on the caller thread.
/// Work items must be independent; results keyed by index stay
/// deterministic regardless of the worker count.
void parallel_for(long long count, int jobs, const std::function<void(long long)>& body);

/// Numerically stable order-independent mean (pairwise summation).
double pairwise_mean(const std::vector<double>& values);

/// Computes the rows for config.experiment, averaging over config.ensemble
/// independent coupling realizations (realization 0 uses the seed itself).
std::vector<SweepRow> run_rows(const ExperimentConfig& config);

/// Renders rows in the configured format, metadata header included.
std::string render_output(const ExperimentConfig& config, const std::vector<SweepRow>& rows);

/// run_rows + render_output + write to config.output.
void run_experiment(const ExperimentConfig& config);

}  // namespace qdlab
