#include "qdlab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace qdlab {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error(context + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error(context + ": expected an integer, got '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error(context + ": expected an unsigned integer, got '" + text + "'");
  }
}

EnvInit parse_env_init(const std::string& text, const std::string& context) {
  if (text == "superposition") return EnvInit::Superposition;
  if (text == "thermal") return EnvInit::Thermal;
  throw config_error(context + ": expected superposition|thermal, got '" + text + "'");
}

SystemSource parse_system_source(const std::string& text, const std::string& context) {
  if (text == "true") return SystemSource::TrueSystem;
  if (text == "fragment") return SystemSource::FragmentDerived;
  throw config_error(context + ": expected true|fragment, got '" + text + "'");
}

std::vector<TraceMethod> parse_trace(const std::string& text, const std::string& context) {
  if (text == "perez") return {TraceMethod::Perez};
  if (text == "staircase") return {TraceMethod::Staircase};
  if (text == "both") return {TraceMethod::Perez, TraceMethod::Staircase};
  throw config_error(context + ": expected perez|staircase|both, got '" + text + "'");
}

OutputFormat parse_format(const std::string& text, const std::string& context) {
  if (text == "csv") return OutputFormat::CSV;
  if (text == "json") return OutputFormat::JSON;
  throw config_error(context + ": expected csv|json, got '" + text + "'");
}

void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value,
               const std::string& context) {
  if (key == "delta_e") {
    config.params.delta_E = parse_double(value, context);
  } else if (key == "delta_eps") {
    config.params.delta_eps = parse_double(value, context);
  } else if (key == "lambda") {
    config.params.lambda = parse_double(value, context);
  } else if (key == "beta") {
    config.params.beta = parse_double(value, context);
  } else if (key == "n") {
    config.params.N = static_cast<int>(parse_int(value, context));
  } else if (key == "env_init") {
    config.params.env_init = parse_env_init(value, context);
  } else if (key == "seed") {
    config.params.seed = parse_u64(value, context);
  } else if (key == "times") {
    config.times = parse_times(value);
  } else if (key == "trace") {
    config.trace_methods = parse_trace(value, context);
  } else if (key == "system_source") {
    config.system_source = parse_system_source(value, context);
  } else if (key == "search_samples") {
    config.search.samples = static_cast<int>(parse_int(value, context));
  } else if (key == "search_refine") {
    config.search.refine_iterations = static_cast<int>(parse_int(value, context));
  } else if (key == "fragment_samples") {
    config.fragment_samples = static_cast<int>(parse_int(value, context));
  } else if (key == "output") {
    config.output = value;
  } else if (key == "format") {
    config.format = parse_format(value, context);
  } else if (key == "jobs") {
    config.jobs = static_cast<int>(parse_int(value, context));
  } else if (key == "ensemble") {
    config.ensemble = static_cast<int>(parse_int(value, context));
  } else if (key == "tolerance") {
    config.tolerance = parse_double(value, context);
  } else {
    throw config_error(context + ": unknown key '" + key + "'");
  }
}

void warn_override(const std::string& key) {
  std::cerr << "warning: flag value for '" << key << "' overrides the config file\n";
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides,
                     const std::set<std::string>& file_keys) {
  const auto note = [&](const std::string& key) {
    if (file_keys.count(key)) warn_override(key);
  };
  if (overrides.seed) {
    note("seed");
    config.params.seed = *overrides.seed;
  }
  if (overrides.n_levels) {
    note("n");
    config.params.N = *overrides.n_levels;
  }
  if (overrides.lambda) {
    note("lambda");
    config.params.lambda = *overrides.lambda;
  }
  if (overrides.beta) {
    note("beta");
    config.params.beta = *overrides.beta;
  }
  if (overrides.env_init) {
    note("env_init");
    config.params.env_init = parse_env_init(*overrides.env_init, "--env-init");
  }
  if (overrides.trace) {
    note("trace");
    config.trace_methods = parse_trace(*overrides.trace, "--trace");
  }
  if (overrides.times) {
    note("times");
    config.times = parse_times(*overrides.times);
  }
  if (overrides.system_source) {
    note("system_source");
    config.system_source = parse_system_source(*overrides.system_source, "--system-source");
  }
  if (overrides.search_samples) {
    note("search_samples");
    config.search.samples = *overrides.search_samples;
  }
  if (overrides.output) {
    note("output");
    config.output = *overrides.output;
  }
  if (overrides.format) {
    note("format");
    config.format = parse_format(*overrides.format, "--format");
  }
  if (overrides.jobs) {
    note("jobs");
    config.jobs = *overrides.jobs;
  }
  if (overrides.ensemble) {
    note("ensemble");
    config.ensemble = *overrides.ensemble;
  }
}

}  // namespace

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::Evolution: return "evolve";
    case Experiment::MISweep: return "mi-sweep";
    case Experiment::InfoDecomposition: return "info-decomp";
    case Experiment::SBSSweep: return "sbs-sweep";
  }
  return "?";
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::CSV ? "csv" : "json";
}

std::string to_string(EnvInit env) {
  return env == EnvInit::Superposition ? "superposition" : "thermal";
}

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> times;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    times.push_back(parse_double(item, "times"));
  }
  if (times.empty()) throw config_error("times: empty list");
  return times;
}

void ExperimentConfig::apply_defaults() {
  if (times.empty()) {
    if (experiment == Experiment::Evolution) {
      times.reserve(501);
      for (int t = 0; t <= 500; ++t) times.push_back(static_cast<double>(t));
    } else if (experiment == Experiment::MISweep) {
      times = {300.0, 400.0, 500.0};
    } else {
      times = {500.0};
    }
  }
  if (output.empty()) {
    std::string stem = to_string(experiment);
    std::replace(stem.begin(), stem.end(), '-', '_');
    output = stem + (format == OutputFormat::CSV ? ".csv" : ".json");
  }
}

void ExperimentConfig::validate() const {
  params.validate();
  if (times.empty()) throw config_error("times must be nonempty");
  for (double t : times) {
    if (t < 0.0) throw config_error("times must be nonnegative");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) throw config_error("times must be strictly increasing");
  }
  if (trace_methods.empty()) throw config_error("at least one trace method is required");
  if (search.samples < 1) throw config_error("search_samples must be >= 1");
  if (search.refine_iterations < 0) throw config_error("search_refine must be >= 0");
  if (fragment_samples < 1) throw config_error("fragment_samples must be >= 1");
  if (jobs < 0) throw config_error("jobs must be >= 0");
  if (ensemble < 1) throw config_error("ensemble must be >= 1");
  if (tolerance <= 0.0) throw config_error("tolerance must be > 0");
}

double ExperimentConfig::tolerance_at(double t) const {
  return t >= 500.0 ? std::max(tolerance, 1e-8) : tolerance;
}

ExperimentConfig make_config(Experiment experiment, const ConfigOverrides& overrides) {
  ExperimentConfig config;
  config.experiment = experiment;
  apply_overrides(config, overrides, {});
  config.apply_defaults();
  config.validate();
  return config;
}

ExperimentConfig load_config(Experiment experiment, const std::string& path,
                             const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");

  ExperimentConfig config;
  config.experiment = experiment;
  std::set<std::string> file_keys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string context = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw config_error(context + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error(context + ": empty key");
    apply_key(config, key, value, context);
    file_keys.insert(key);
  }

  apply_overrides(config, overrides, file_keys);
  config.apply_defaults();
  config.validate();
  return config;
}

std::vector<std::pair<std::string, std::string>> config_metadata(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("experiment", to_string(config.experiment));
  meta.emplace_back("delta_e", format_double(config.params.delta_E));
  meta.emplace_back("delta_eps", format_double(config.params.delta_eps));
  meta.emplace_back("lambda", format_double(config.params.lambda));
  meta.emplace_back("beta", format_double(config.params.beta));
  meta.emplace_back("n", std::to_string(config.params.N));
  meta.emplace_back("env_init", to_string(config.params.env_init));
  meta.emplace_back("sys_init", "plus_superposition");
  meta.emplace_back("seed", std::to_string(config.params.seed));
  {
    std::string joined;
    for (std::size_t i = 0; i < config.trace_methods.size(); ++i) {
      if (i) joined += ",";
      joined += to_string(config.trace_methods[i]);
    }
    meta.emplace_back("trace", joined);
  }
  {
    std::string joined;
    for (std::size_t i = 0; i < config.times.size(); ++i) {
      if (i) joined += ",";
      joined += format_double(config.times[i]);
    }
    meta.emplace_back("times", joined);
  }
  meta.emplace_back("system_source", to_string(config.system_source));
  meta.emplace_back("search_samples", std::to_string(config.search.samples));
  meta.emplace_back("search_refine", std::to_string(config.search.refine_iterations));
  meta.emplace_back("fragment_samples", std::to_string(config.fragment_samples));
  meta.emplace_back("ensemble", std::to_string(config.ensemble));
  meta.emplace_back("tolerance", format_double(config.tolerance));
  meta.emplace_back("format", to_string(config.format));
  return meta;
}

}  // namespace qdlab
