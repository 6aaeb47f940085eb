#include "qdlab/infometrics.hpp"

#include <stdexcept>

namespace qdlab {

namespace {

constexpr double kBranchCutoff = 1e-12;

struct SystemBlocks {
  // rho_SF = |0><0| (x) a + |0><1| (x) b + |1><0| (x) b^dag + |1><1| (x) c.
  cmatrix a, b, c;
};

SystemBlocks blocks_of(const DensityMatrix& rho_sf) {
  if (rho_sf.dims().empty() || rho_sf.dims()[0] != 2) {
    throw std::invalid_argument("infometrics: system factor must be 2-dimensional");
  }
  long long df = 1;
  for (std::size_t f = 1; f < rho_sf.dims().size(); ++f) df *= rho_sf.dims()[f];
  const cmatrix& m = rho_sf.matrix();
  SystemBlocks blocks;
  blocks.a = m.block(0, 0, df, df);
  blocks.b = m.block(0, df, df, df);
  blocks.c = m.block(df, df, df, df);
  return blocks;
}

/// tr_S[(P (x) 1) rho (P (x) 1)] for a system projector P; equals
/// tr_S[(P (x) 1) rho] because P is idempotent.
cmatrix conditional_block(const SystemBlocks& blocks, const Eigen::Matrix2cd& p) {
  return p(0, 0) * blocks.a + p(0, 1) * blocks.b.adjoint() + p(1, 0) * blocks.b +
         p(1, 1) * blocks.c;
}

double chi_at_axis(const SystemBlocks& blocks, double fragment_entropy, const BlochVector& axis,
                   double tolerance) {
  double conditional = 0.0;
  for (int sign : {+1, -1}) {
    const cmatrix k = conditional_block(blocks, axis.projector(sign));
    const double p = k.trace().real();
    if (p <= kBranchCutoff) continue;  // empty branch contributes nothing
    // Normalizing by p amplifies the absolute rounding noise by 1/p.
    conditional += p * entropy_of_hermitian(k / p, tolerance / p);
  }
  return fragment_entropy - conditional;
}

}  // namespace

std::string to_string(SystemSource source) {
  return source == SystemSource::TrueSystem ? "true" : "fragment";
}

double mutual_information(const DensityMatrix& rho_sf, SystemSource source,
                          std::optional<double> true_system_entropy) {
  if (rho_sf.is_zero()) {
    return source == SystemSource::TrueSystem ? true_system_entropy.value_or(0.0) : 0.0;
  }
  const DensityMatrix rho_f = partial_trace(rho_sf, {1});
  double h_s = 0.0;
  if (source == SystemSource::TrueSystem) {
    if (!true_system_entropy.has_value()) {
      throw std::invalid_argument("mutual_information: TrueSystem needs the true H(S)");
    }
    h_s = *true_system_entropy;
  } else {
    h_s = von_neumann_entropy(partial_trace(rho_sf, {0}));
  }
  return h_s + von_neumann_entropy(rho_f) - von_neumann_entropy(rho_sf);
}

HolevoResult holevo_chi(const DensityMatrix& rho_sf, const SearchBudget& budget) {
  if (rho_sf.is_zero()) return HolevoResult{};
  const SystemBlocks blocks = blocks_of(rho_sf);
  // The measured-ensemble average state is rho_F for every axis, so its
  // entropy is hoisted out of the search.
  const double h_f = entropy_of_hermitian(blocks.a + blocks.c, rho_sf.tolerance());
  const AxisSearchResult found = maximize_over_axes(
      [&](const BlochVector& axis) {
        return chi_at_axis(blocks, h_f, axis, rho_sf.tolerance());
      },
      budget);
  return HolevoResult{found.value, found.axis};
}

double discord(const DensityMatrix& rho_sf, SystemSource source,
               std::optional<double> true_system_entropy, const SearchBudget& budget) {
  return mutual_information(rho_sf, source, true_system_entropy) -
         holevo_chi(rho_sf, budget).chi;
}

InformationReport analyze_fragment(const DensityMatrix& rho_sf, SystemSource source,
                                   std::optional<double> true_system_entropy,
                                   const SearchBudget& budget) {
  InformationReport report;
  report.system_source = source;
  if (rho_sf.is_zero()) {
    report.system_entropy =
        source == SystemSource::TrueSystem ? true_system_entropy.value_or(0.0) : 0.0;
    report.mutual_information = report.system_entropy;
    report.discord = report.mutual_information;
    return report;
  }

  report.fragment_entropy = von_neumann_entropy(partial_trace(rho_sf, {1}));
  report.joint_entropy = von_neumann_entropy(rho_sf);
  if (source == SystemSource::TrueSystem) {
    if (!true_system_entropy.has_value()) {
      throw std::invalid_argument("analyze_fragment: TrueSystem needs the true H(S)");
    }
    report.system_entropy = *true_system_entropy;
  } else {
    report.system_entropy = von_neumann_entropy(partial_trace(rho_sf, {0}));
  }
  report.mutual_information =
      report.system_entropy + report.fragment_entropy - report.joint_entropy;

  const HolevoResult holevo = holevo_chi(rho_sf, budget);
  report.chi = holevo.chi;
  report.best_axis = holevo.axis;
  report.discord = report.mutual_information - report.chi;
  return report;
}

}  // namespace qdlab
