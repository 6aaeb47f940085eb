#pragma once

#include <array>
#include <vector>

#include "qdlab/density_matrix.hpp"
#include "qdlab/fragment.hpp"
#include "qdlab/search.hpp"

namespace qdlab {

/// rho_SF split along a system measurement axis into its pinched
/// (separable) part and the coherence remainder, with the branch weights
/// and normalized branch fragment states.
struct SeparableSplit {
  cmatrix separable;             // sum_i (P_i (x) 1) rho (P_i (x) 1)
  cmatrix coherence;             // rho - separable
  std::array<double, 2> p{};     // branch probabilities
  std::array<cmatrix, 2> branch; // normalized fragment states, valid when p_i > 1e-12
  std::array<bool, 2> branch_valid{};
};

/// Upper bound on the trace distance from rho_SF to the nearest
/// spectrum-broadcast-structure state, with its two contributions.
struct SBSBoundReport {
  double t = 0.0;
  FragmentSelection fragment;
  double eta = 0.0;
  double nonsep_term = 0.0;   // |coherence|_1 at the best axis
  double disting_term = 0.0;  // sum_{i!=j} sqrt(p_i p_j) B(rho_i, rho_j)
  BlochVector best_axis{Eigen::Vector3d(0.0, 0.0, 1.0)};
  std::array<double, 2> p{};
  /// The fragment factor is a scalar (dimension 1): the bound vanishes
  /// trivially and does not certify broadcast structure.
  bool degenerate = false;
};

/// Pinches rho_SF along the +-axis system projectors. The pieces satisfy
/// separable + coherence = rho_SF exactly and tr[separable] = tr[rho_SF].
SeparableSplit separable_projection(const DensityMatrix& rho_sf, const BlochVector& axis);

/// sum_{i != j} sqrt(p_i p_j) B(rho_i, rho_j); zero-weight branches are
/// skipped. Throws std::invalid_argument if sizes differ or the weights do
/// not sum to 1.
double distinguishability_term(const std::vector<double>& p, const std::vector<cmatrix>& states,
                               double tolerance = kDefaultTolerance);

/// Minimizes |coherence|_1 + distinguishability over sampled measurement
/// axes (same sample-and-refine scheme and budget type as the Holevo
/// search) and reports the minimum with its split terms.
SBSBoundReport eta_bound(const DensityMatrix& rho_sf, const SearchBudget& budget);

/// Discrimination-error functional sum_i p_i tr[rho_i (1 - Pi_i)] for a
/// complete projector set on the fragment space. Test oracle for the bound
/// chain; throws std::invalid_argument if the projectors do not resolve the
/// identity.
double discrimination_error(const std::vector<double>& p, const std::vector<cmatrix>& states,
                            const std::vector<cmatrix>& projectors);

}  // namespace qdlab
