#include "qdlab/search.hpp"

#include <stdexcept>

#include "qdlab/rng.hpp"

namespace qdlab {

namespace {

constexpr std::uint64_t kRefineStream = 0x5EEDF1EEull;

Eigen::Vector3d gaussian_triple(SplitMix64& rng) {
  return Eigen::Vector3d(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
}

}  // namespace

BlochVector sphere_sample(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(derive_seed(seed, index));
  Eigen::Vector3d g = gaussian_triple(rng);
  while (g.norm() < 1e-9) g = gaussian_triple(rng);
  return BlochVector::normalized(g);
}

AxisSearchResult minimize_over_axes(const std::function<double(const BlochVector&)>& objective,
                                    const SearchBudget& budget) {
  if (budget.samples < 1) throw std::invalid_argument("SearchBudget: samples must be >= 1");
  if (budget.refine_iterations < 0 || budget.halve_after < 1) {
    throw std::invalid_argument("SearchBudget: bad refinement settings");
  }

  AxisSearchResult best;
  best.axis = sphere_sample(budget.seed, 0);
  best.value = objective(best.axis);
  best.evaluations = 1;
  for (int i = 1; i < budget.samples; ++i) {
    const BlochVector axis = sphere_sample(budget.seed, static_cast<std::uint64_t>(i));
    const double value = objective(axis);
    ++best.evaluations;
    if (value < best.value) {
      best.value = value;
      best.axis = axis;
    }
  }

  SplitMix64 rng(derive_seed(budget.seed, kRefineStream));
  double scale = 0.5;
  int rejected = 0;
  for (int i = 0; i < budget.refine_iterations; ++i) {
    const Eigen::Vector3d candidate = best.axis.coords() + scale * gaussian_triple(rng);
    if (candidate.norm() < 1e-9) continue;
    const BlochVector axis = BlochVector::normalized(candidate);
    const double value = objective(axis);
    ++best.evaluations;
    if (value < best.value) {
      best.value = value;
      best.axis = axis;
      rejected = 0;
    } else if (++rejected >= budget.halve_after) {
      scale *= 0.5;
      rejected = 0;
    }
  }
  return best;
}

AxisSearchResult maximize_over_axes(const std::function<double(const BlochVector&)>& objective,
                                    const SearchBudget& budget) {
  AxisSearchResult result =
      minimize_over_axes([&](const BlochVector& axis) { return -objective(axis); }, budget);
  result.value = -result.value;
  return result;
}

}  // namespace qdlab
