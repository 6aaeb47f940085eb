#pragma once

#include <cstdint>
#include <functional>

#include "qdlab/density_matrix.hpp"

namespace qdlab {

/// Budget for the random Bloch-sphere searches. Shared between the Holevo
/// maximization and the broadcast-distance minimization so the two are
/// comparable in cost and seeding.
///
/// Sample i is a pure function of (seed, i), so enlarging `samples` only
/// extends the candidate set: results are exactly monotone in the sampling
/// budget. Refinement hill-climbs from the best sample and accepts only
/// improvements, so it is monotone in `refine_iterations` as well.
struct SearchBudget {
  int samples = 2000;
  int refine_iterations = 200;
  /// Perturbation scale is halved after this many consecutive rejections.
  /// 10 lets 200 refinement steps shrink the scale far enough to resolve
  /// optima near zero (the degenerate single-level fragments).
  int halve_after = 10;
  std::uint64_t seed = 0;
};

struct AxisSearchResult {
  BlochVector axis{Eigen::Vector3d(0.0, 0.0, 1.0)};
  double value = 0.0;
  long long evaluations = 0;
};

/// Uniform axis sample i of the stream identified by seed.
BlochVector sphere_sample(std::uint64_t seed, std::uint64_t index);

/// Minimizes `objective` over the unit sphere: `samples` independent draws,
/// then Gaussian-perturbation hill climbing around the incumbent with a
/// shrinking scale.
AxisSearchResult minimize_over_axes(const std::function<double(const BlochVector&)>& objective,
                                    const SearchBudget& budget);

/// Maximizes `objective`; same scheme with the sign flipped.
AxisSearchResult maximize_over_axes(const std::function<double(const BlochVector&)>& objective,
                                    const SearchBudget& budget);

}  // namespace qdlab
