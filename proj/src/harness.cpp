#include "qdlab/harness.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qdlab/propagator.hpp"
#include "qdlab/rng.hpp"
#include "qdlab/sbs.hpp"

namespace qdlab {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Stream tags for deriving independent per-task seeds.
constexpr std::uint64_t kMethodStream = 0x4D455448ull;    // per trace method
constexpr std::uint64_t kChiStream = 0x43484953ull;       // Holevo search
constexpr std::uint64_t kEtaStream = 0x45544142ull;       // eta search
constexpr std::uint64_t kFragmentStream = 0x46524147ull;  // subset sampling

std::uint64_t method_seed(std::uint64_t realization_seed, TraceMethod method,
                          std::size_t time_index, int k) {
  const std::uint64_t m = method == TraceMethod::Perez ? 0 : 1;
  std::uint64_t s = derive_seed(realization_seed, kMethodStream + m);
  s = derive_seed(s, static_cast<std::uint64_t>(time_index));
  return derive_seed(s, static_cast<std::uint64_t>(k));
}

double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 8) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += data[i];
    return sum;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

/// Everything shared by one realization of one run.
struct Realization {
  HamiltonianSet hamiltonians;
  Propagator propagator;
  PreparedState prepared;
  std::uint64_t seed;

  Realization(const ExperimentConfig& config, std::uint64_t realization_seed)
      : hamiltonians(build_hamiltonians(config.params,
                                        goe_sample(config.params.N, realization_seed))),
        propagator(hamiltonians),
        prepared(propagator.prepare(
            initial_state(config.params).with_tolerance(config.tolerance))),
        seed(realization_seed) {}
};

struct FragmentOutcome {
  bool included = false;
  double mutual_information = 0.0;
  double chi = 0.0;
  double discord = 0.0;
  double system_entropy = 0.0;  // the H(S) that entered I for this fragment
  SBSBoundReport sbs;
};

std::vector<SweepRow> evolution_rows(const ExperimentConfig& config,
                                     const Realization& realization) {
  std::vector<SweepRow> rows;
  rows.reserve(config.times.size() * 3);
  const std::string env = to_string(config.params.env_init);
  for (double t : config.times) {
    const cmatrix rho_s = realization.prepared.reduced_first_factor_at(t);
    const double entropy = entropy_of_hermitian(rho_s, config.tolerance_at(t));
    const double excited = rho_s(1, 1).real();
    const double coherence = std::abs(rho_s(0, 1));
    for (const auto& [name, value] :
         std::initializer_list<std::pair<const char*, double>>{
             {"H_S", entropy}, {"excited_population", excited}, {"coherence_abs", coherence}}) {
      SweepRow row;
      row.experiment = to_string(config.experiment);
      row.env_init = env;
      row.t = t;
      row.value_name = name;
      row.value = value;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/// Mean over included outcomes of one field, in fragment-index order.
double mean_of(const std::vector<FragmentOutcome>& outcomes,
               double FragmentOutcome::*field) {
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (const auto& outcome : outcomes) {
    if (outcome.included) values.push_back(outcome.*field);
  }
  if (values.empty()) return 0.0;
  return pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
}

long long included_count(const std::vector<FragmentOutcome>& outcomes) {
  long long n = 0;
  for (const auto& outcome : outcomes) n += outcome.included ? 1 : 0;
  return n;
}

void log_exclusions(const ExperimentConfig& config, TraceMethod method, double t, int k,
                    long long excluded) {
  if (excluded > 0) {
    std::cerr << "note: " << to_string(config.experiment) << " method=" << to_string(method)
              << " t=" << format_double(t) << " k=" << k << ": excluded " << excluded
              << " zero-weight fragment state(s) from the aggregate\n";
  }
}

void push_row(std::vector<SweepRow>& rows, const ExperimentConfig& config, TraceMethod method,
              double t, const FragmentSelection& proto, long long n_fragments,
              const std::string& value_name, double value) {
  SweepRow row;
  row.experiment = to_string(config.experiment);
  row.method = to_string(method);
  row.env_init = to_string(config.params.env_init);
  row.t = t;
  row.fraction = proto.fraction();
  row.k = static_cast<int>(proto.members.size());
  row.n_fragments = n_fragments;
  row.value_name = value_name;
  row.value = value;
  rows.push_back(std::move(row));
}

std::vector<SweepRow> information_sweep_rows(const ExperimentConfig& config,
                                             const Realization& realization) {
  const bool with_search = config.experiment == Experiment::InfoDecomposition;
  std::vector<SweepRow> rows;

  for (TraceMethod method : config.trace_methods) {
    for (std::size_t ti = 0; ti < config.times.size(); ++ti) {
      const double t = config.times[ti];
      const double tol = config.tolerance_at(t);
      const DensityMatrix rho_se = realization.prepared.at(t, tol);
      const double true_h_s =
          entropy_of_hermitian(realization.prepared.reduced_first_factor_at(t), tol);

      const int cardinality =
          method == TraceMethod::Perez ? config.params.N : config.params.N - 1;
      for (int k = 0; k <= cardinality; ++k) {
        const std::uint64_t group_seed = method_seed(realization.seed, method, ti, k);
        const auto fragments = fragments_for_sweep(method, config.params.N, k,
                                                   config.fragment_samples,
                                                   derive_seed(group_seed, kFragmentStream));
        std::vector<FragmentOutcome> outcomes(fragments.size());

        if (method == TraceMethod::Perez && k == 0) {
          // An empty level selection carries no weight at all; report zero
          // information rather than excluding the row.
          outcomes[0].included = true;
          outcomes[0].system_entropy =
              config.system_source == SystemSource::TrueSystem ? true_h_s : 0.0;
        } else {
          parallel_for(
              static_cast<long long>(fragments.size()), config.jobs, [&](long long fi) {
                const auto& fragment = fragments[static_cast<std::size_t>(fi)];
                const DensityMatrix rho_sf = apply_trace(rho_se, fragment);
                FragmentOutcome& outcome = outcomes[static_cast<std::size_t>(fi)];
                if (rho_sf.is_zero()) return;
                outcome.included = true;
                const std::optional<double> h_s_true =
                    config.system_source == SystemSource::TrueSystem
                        ? std::optional<double>(true_h_s)
                        : std::nullopt;
                if (with_search) {
                  SearchBudget budget = config.search;
                  budget.seed = derive_seed(derive_seed(group_seed, kChiStream),
                                            static_cast<std::uint64_t>(fi));
                  const InformationReport report =
                      analyze_fragment(rho_sf, config.system_source, h_s_true, budget);
                  outcome.mutual_information = report.mutual_information;
                  outcome.chi = report.chi;
                  outcome.discord = report.discord;
                  outcome.system_entropy = report.system_entropy;
                } else {
                  outcome.mutual_information =
                      mutual_information(rho_sf, config.system_source, h_s_true);
                  outcome.system_entropy =
                      config.system_source == SystemSource::TrueSystem
                          ? true_h_s
                          : von_neumann_entropy(partial_trace(rho_sf, {0}));
                }
              });
        }

        const long long included = included_count(outcomes);
        log_exclusions(config, method, t, k,
                       static_cast<long long>(outcomes.size()) - included);

        const double mean_i = mean_of(outcomes, &FragmentOutcome::mutual_information);
        const double h_s_ref = config.system_source == SystemSource::TrueSystem
                                   ? true_h_s
                                   : mean_of(outcomes, &FragmentOutcome::system_entropy);
        FragmentSelection proto;
        proto.method = method;
        proto.env_levels = config.params.N;
        proto.members.resize(static_cast<std::size_t>(k));
        const auto emit = [&](const std::string& name, double value) {
          push_row(rows, config, method, t, proto, included, name, value);
        };
        emit("I_mean", mean_i);
        emit("I_over_HS", h_s_ref > 0.0 ? mean_i / h_s_ref : 0.0);
        if (with_search) {
          const double mean_chi = mean_of(outcomes, &FragmentOutcome::chi);
          const double mean_discord = mean_of(outcomes, &FragmentOutcome::discord);
          emit("chi_mean", mean_chi);
          emit("discord_mean", mean_discord);
          emit("additivity_gap", std::abs(mean_chi + mean_discord - mean_i));
        }
        emit("H_S", h_s_ref);
        emit("H_S_x2", 2.0 * h_s_ref);
        emit("n_zero_excluded", static_cast<double>(outcomes.size()) - included);
      }
    }
  }
  return rows;
}

std::vector<SweepRow> sbs_sweep_rows(const ExperimentConfig& config,
                                     const Realization& realization) {
  std::vector<SweepRow> rows;
  for (TraceMethod method : config.trace_methods) {
    for (std::size_t ti = 0; ti < config.times.size(); ++ti) {
      const double t = config.times[ti];
      const double tol = config.tolerance_at(t);
      const DensityMatrix rho_se = realization.prepared.at(t, tol);

      const int cardinality =
          method == TraceMethod::Perez ? config.params.N : config.params.N - 1;
      for (int k = 1; k <= cardinality; ++k) {
        const std::uint64_t group_seed = method_seed(realization.seed, method, ti, k);
        const auto fragments = fragments_for_sweep(method, config.params.N, k,
                                                   config.fragment_samples,
                                                   derive_seed(group_seed, kFragmentStream));
        std::vector<FragmentOutcome> outcomes(fragments.size());
        parallel_for(static_cast<long long>(fragments.size()), config.jobs, [&](long long fi) {
          const auto& fragment = fragments[static_cast<std::size_t>(fi)];
          const DensityMatrix rho_sf = apply_trace(rho_se, fragment);
          FragmentOutcome& outcome = outcomes[static_cast<std::size_t>(fi)];
          if (rho_sf.is_zero()) return;
          outcome.included = true;
          SearchBudget budget = config.search;
          budget.seed = derive_seed(derive_seed(group_seed, kEtaStream),
                                    static_cast<std::uint64_t>(fi));
          outcome.sbs = eta_bound(rho_sf, budget);
          outcome.sbs.t = t;
          outcome.sbs.fragment = fragment;
        });

        const long long included = included_count(outcomes);
        log_exclusions(config, method, t, k,
                       static_cast<long long>(outcomes.size()) - included);

        // Best case over equal-size fragments: the minimum, first index wins ties.
        const SBSBoundReport* best = nullptr;
        for (const auto& outcome : outcomes) {
          if (!outcome.included) continue;
          if (best == nullptr || outcome.sbs.eta < best->eta) best = &outcome.sbs;
        }

        FragmentSelection proto;
        proto.method = method;
        proto.env_levels = config.params.N;
        proto.members.resize(static_cast<std::size_t>(k));
        const auto emit = [&](const std::string& name, double value) {
          push_row(rows, config, method, t, proto, included, name, value);
        };
        emit("eta_min", best ? best->eta : 0.0);
        emit("nonsep_term", best ? best->nonsep_term : 0.0);
        emit("disting_term", best ? best->disting_term : 0.0);
        emit("degenerate", best && best->degenerate ? 1.0 : 0.0);
        emit("axis_x", best ? best->best_axis.x() : 0.0);
        emit("axis_y", best ? best->best_axis.y() : 0.0);
        emit("axis_z", best ? best->best_axis.z() : 0.0);
        emit("p0", best ? best->p[0] : 0.0);
        emit("p1", best ? best->p[1] : 0.0);
        emit("n_zero_excluded", static_cast<double>(outcomes.size()) - included);
      }
    }
  }
  return rows;
}

std::vector<SweepRow> realization_rows(const ExperimentConfig& config,
                                       std::uint64_t realization_seed) {
  const Realization realization(config, realization_seed);
  switch (config.experiment) {
    case Experiment::Evolution: return evolution_rows(config, realization);
    case Experiment::MISweep:
    case Experiment::InfoDecomposition: return information_sweep_rows(config, realization);
    case Experiment::SBSSweep: return sbs_sweep_rows(config, realization);
  }
  throw std::logic_error("unknown experiment");
}

}  // namespace

void parallel_for(long long count, int jobs, const std::function<void(long long)>& body) {
  if (count <= 0) return;
  long long workers = jobs > 0 ? jobs : static_cast<long long>(std::thread::hardware_concurrency());
  workers = std::max(1ll, std::min(workers, count));
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const long long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long long w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

double pairwise_mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
}

std::vector<SweepRow> run_rows(const ExperimentConfig& config) {
  config.validate();
  std::vector<SweepRow> rows = realization_rows(config, config.params.seed);
  if (config.ensemble == 1) return rows;

  std::vector<double> sums(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) sums[r] = rows[r].value;
  for (int m = 1; m < config.ensemble; ++m) {
    const std::vector<SweepRow> more =
        realization_rows(config, derive_seed(config.params.seed, static_cast<std::uint64_t>(m)));
    if (more.size() != rows.size()) {
      throw std::logic_error("ensemble realizations produced mismatched row sets");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) sums[r] += more[r].value;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].value = sums[r] / static_cast<double>(config.ensemble);
  }
  return rows;
}

std::string render_output(const ExperimentConfig& config, const std::vector<SweepRow>& rows) {
  if (config.format == OutputFormat::CSV) {
    std::string out;
    for (const auto& [key, value] : config_metadata(config)) {
      out += "# " + key + " = " + value + "\n";
    }
    out += "experiment,method,env_init,t,f,k,n_fragments,value_name,value\n";
    for (const auto& row : rows) {
      out += row.experiment + "," + row.method + "," + row.env_init + "," +
             format_double(row.t) + ",";
      out += row.fraction ? format_double(*row.fraction) : "";
      out += ",";
      out += row.k ? std::to_string(*row.k) : "";
      out += ",";
      out += row.n_fragments ? std::to_string(*row.n_fragments) : "";
      out += "," + row.value_name + "," + format_double(row.value) + "\n";
    }
    return out;
  }

  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta;
  for (const auto& [key, value] : config_metadata(config)) meta[key] = value;
  doc["config"] = std::move(meta);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json rec;
    rec["experiment"] = row.experiment;
    rec["method"] = row.method;
    rec["env_init"] = row.env_init;
    rec["t"] = row.t;
    rec["f"] = row.fraction ? nlohmann::ordered_json(*row.fraction) : nlohmann::ordered_json();
    rec["k"] = row.k ? nlohmann::ordered_json(*row.k) : nlohmann::ordered_json();
    rec["n_fragments"] =
        row.n_fragments ? nlohmann::ordered_json(*row.n_fragments) : nlohmann::ordered_json();
    rec["value_name"] = row.value_name;
    rec["value"] = row.value;
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

void run_experiment(const ExperimentConfig& config) {
  // Open before computing so a bad path fails in milliseconds, not after
  // a full sweep.
  std::ofstream out(config.output, std::ios::binary);
  if (!out) throw io_error("cannot open output file '" + config.output + "'");
  out << render_output(config, run_rows(config));
  out.flush();
  if (!out) throw io_error("failed while writing '" + config.output + "'");
}

}  // namespace qdlab
