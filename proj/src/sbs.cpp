#include "qdlab/sbs.hpp"

#include <cmath>
#include <stdexcept>

namespace qdlab {

namespace {

constexpr double kBranchCutoff = 1e-12;

long long fragment_dim(const DensityMatrix& rho_sf) {
  if (rho_sf.dims().empty() || rho_sf.dims()[0] != 2) {
    throw std::invalid_argument("sbs: system factor must be 2-dimensional");
  }
  long long df = 1;
  for (std::size_t f = 1; f < rho_sf.dims().size(); ++f) df *= rho_sf.dims()[f];
  return df;
}

}  // namespace

SeparableSplit separable_projection(const DensityMatrix& rho_sf, const BlochVector& axis) {
  const long long df = fragment_dim(rho_sf);
  const cmatrix& m = rho_sf.matrix();
  const cmatrix a = m.block(0, 0, df, df);
  const cmatrix b = m.block(0, df, df, df);
  const cmatrix c = m.block(df, df, df, df);

  SeparableSplit split;
  split.separable = cmatrix::Zero(2 * df, 2 * df);
  const std::array<Eigen::Matrix2cd, 2> projectors{axis.projector(+1), axis.projector(-1)};
  for (int br = 0; br < 2; ++br) {
    const Eigen::Matrix2cd& p = projectors[static_cast<std::size_t>(br)];
    // (P (x) 1) rho (P (x) 1): system block (i,j) becomes
    // sum_{k,l} P(i,k) rho_block(k,l) P(l,j).
    const cmatrix k00 = p(0, 0) * a + p(0, 1) * b.adjoint();
    const cmatrix k01 = p(0, 0) * b + p(0, 1) * c;
    const cmatrix k10 = p(1, 0) * a + p(1, 1) * b.adjoint();
    const cmatrix k11 = p(1, 0) * b + p(1, 1) * c;
    split.separable.block(0, 0, df, df) += k00 * p(0, 0) + k01 * p(1, 0);
    split.separable.block(0, df, df, df) += k00 * p(0, 1) + k01 * p(1, 1);
    split.separable.block(df, 0, df, df) += k10 * p(0, 0) + k11 * p(1, 0);
    split.separable.block(df, df, df, df) += k10 * p(0, 1) + k11 * p(1, 1);

    // Branch fragment state: tr_S[(P (x) 1) rho].
    const cmatrix branch_raw =
        p(0, 0) * a + p(0, 1) * b.adjoint() + p(1, 0) * b + p(1, 1) * c;
    const double weight = branch_raw.trace().real();
    split.p[static_cast<std::size_t>(br)] = weight;
    if (weight > kBranchCutoff) {
      split.branch[static_cast<std::size_t>(br)] = branch_raw / weight;
      split.branch_valid[static_cast<std::size_t>(br)] = true;
    }
  }
  split.coherence = m - split.separable;
  return split;
}

double distinguishability_term(const std::vector<double>& p, const std::vector<cmatrix>& states,
                               double tolerance) {
  if (p.size() != states.size()) {
    throw std::invalid_argument("distinguishability_term: sizes differ");
  }
  double total = 0.0;
  for (double w : p) {
    if (w < -1e-10) throw std::invalid_argument("distinguishability_term: negative probability");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("distinguishability_term: probabilities must sum to 1");
  }

  std::vector<cmatrix> roots(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (p[i] > kBranchCutoff) roots[i] = psd_sqrt(states[i], tolerance);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (p[i] <= kBranchCutoff || p[j] <= kBranchCutoff) continue;
      // Both ordered pairs (i,j) and (j,i) appear in the sum.
      sum += 2.0 * std::sqrt(p[i] * p[j]) * trace_norm(roots[i] * roots[j]);
    }
  }
  return sum;
}

SBSBoundReport eta_bound(const DensityMatrix& rho_sf, const SearchBudget& budget) {
  const long long df = fragment_dim(rho_sf);
  SBSBoundReport report;
  report.degenerate = df == 1;
  if (rho_sf.is_zero()) return report;

  const double tolerance = rho_sf.tolerance();
  // Branch states are normalized by their weight, which amplifies rounding
  // noise by 1/p; the positivity bar scales along.
  auto branch_fidelity_term = [&](const SeparableSplit& split) {
    if (!split.branch_valid[0] || !split.branch_valid[1]) return 0.0;
    return 2.0 * std::sqrt(split.p[0] * split.p[1]) *
           trace_norm(psd_sqrt(split.branch[0], tolerance / split.p[0]) *
                      psd_sqrt(split.branch[1], tolerance / split.p[1]));
  };
  auto objective = [&](const BlochVector& axis) {
    const SeparableSplit split = separable_projection(rho_sf, axis);
    return hermitian_trace_norm(split.coherence) + branch_fidelity_term(split);
  };

  const AxisSearchResult found = minimize_over_axes(objective, budget);
  const SeparableSplit best = separable_projection(rho_sf, found.axis);
  report.best_axis = found.axis;
  report.nonsep_term = hermitian_trace_norm(best.coherence);
  report.disting_term = branch_fidelity_term(best);
  report.eta = report.nonsep_term + report.disting_term;
  report.p = best.p;
  return report;
}

double discrimination_error(const std::vector<double>& p, const std::vector<cmatrix>& states,
                            const std::vector<cmatrix>& projectors) {
  if (p.size() != states.size() || p.size() != projectors.size()) {
    throw std::invalid_argument("discrimination_error: sizes differ");
  }
  if (states.empty()) throw std::invalid_argument("discrimination_error: empty ensemble");
  const Eigen::Index d = states.front().rows();
  cmatrix resolution = cmatrix::Zero(d, d);
  for (const cmatrix& pi : projectors) {
    if (pi.rows() != d || pi.cols() != d) {
      throw std::invalid_argument("discrimination_error: projector shape mismatch");
    }
    resolution += pi;
  }
  if (max_abs(resolution - cmatrix::Identity(d, d)) > 1e-8) {
    throw std::invalid_argument("discrimination_error: projectors do not resolve the identity");
  }

  double err = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    err += p[i] * (states[i] * (cmatrix::Identity(d, d) - projectors[i])).trace().real();
  }
  return err;
}

}  // namespace qdlab
