#pragma once

#include <optional>

#include "qdlab/density_matrix.hpp"
#include "qdlab/fragment.hpp"
#include "qdlab/search.hpp"

namespace qdlab {

/// Which reduced system state supplies H(S) in I = H(S) + H(F) - H(SF):
/// the true one (trace of the full joint state) or the one derived from the
/// system-fragment state itself. Under the level-elimination trace the two
/// differ; under the staircase trace they agree.
enum class SystemSource { TrueSystem, FragmentDerived };

std::string to_string(SystemSource source);

/// Per-(time, fragment) information diagnostics.
struct InformationReport {
  double t = 0.0;
  FragmentSelection fragment;
  double system_entropy = 0.0;    // H(S), per system_source
  double fragment_entropy = 0.0;  // H(F)
  double joint_entropy = 0.0;     // H(SF)
  double mutual_information = 0.0;
  double chi = 0.0;
  double discord = 0.0;
  BlochVector best_axis{Eigen::Vector3d(0.0, 0.0, 1.0)};
  SystemSource system_source = SystemSource::TrueSystem;
};

/// I = H(S) + H(F) - H(SF). With TrueSystem the caller passes H(S) computed
/// from the full joint state; with FragmentDerived it is taken from
/// tr_F[rho_SF]. No clamping: under the level-elimination trace with
/// TrueSystem the value may exceed the usual 2 min(H(S), H(F)) ceiling.
double mutual_information(const DensityMatrix& rho_sf, SystemSource source,
                          std::optional<double> true_system_entropy = std::nullopt);

struct HolevoResult {
  double chi = 0.0;
  BlochVector axis{Eigen::Vector3d(0.0, 0.0, 1.0)};
};

/// Accessible information about the system stored in the fragment,
/// maximized over rank-one projective system measurements (1 +- r.sigma)/2
/// by random search over the unit sphere. A lower bound on the true Holevo
/// quantity that tightens monotonically with the budget.
HolevoResult holevo_chi(const DensityMatrix& rho_sf, const SearchBudget& budget);

/// D = I - chi with the same system-entropy convention; an upper bound on
/// the true discord since chi is a lower bound.
double discord(const DensityMatrix& rho_sf, SystemSource source,
               std::optional<double> true_system_entropy, const SearchBudget& budget);

/// All of the above in one pass (shares the entropies and the search).
InformationReport analyze_fragment(const DensityMatrix& rho_sf, SystemSource source,
                                   std::optional<double> true_system_entropy,
                                   const SearchBudget& budget);

}  // namespace qdlab
