#pragma once

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "qdlab/density_matrix.hpp"
#include "qdlab/fragment.hpp"
#include "qdlab/rng.hpp"

namespace qdlab::testing {

inline cmatrix random_complex_matrix(int rows, int cols, SplitMix64& rng) {
  cmatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = complexd(rng.next_gaussian(), rng.next_gaussian());
    }
  }
  return m;
}

/// Unit-trace PSD matrix of the given rank (Wishart-style).
inline cmatrix random_psd(int dim, int rank, SplitMix64& rng) {
  const cmatrix g = random_complex_matrix(dim, rank, rng);
  cmatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline DensityMatrix random_state(std::vector<int> dims, int rank, std::uint64_t seed) {
  long long total = 1;
  for (int d : dims) total *= d;
  SplitMix64 rng(seed);
  return DensityMatrix(std::move(dims), random_psd(static_cast<int>(total), rank, rng));
}

/// Haar-ish unitary from the QR decomposition of a Gaussian matrix.
inline cmatrix random_unitary(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const cmatrix g = random_complex_matrix(dim, dim, rng);
  Eigen::HouseholderQR<cmatrix> qr(g);
  cmatrix q = qr.householderQ();
  // Fix the phase convention so the result is stable.
  const cmatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const complexd d = r(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

inline cvector random_pure(int dim, SplitMix64& rng) {
  cvector psi(dim);
  for (int i = 0; i < dim; ++i) psi[i] = complexd(rng.next_gaussian(), rng.next_gaussian());
  return psi / psi.norm();
}

/// (|00> + |11>)/sqrt(2) on dims {2, 2}.
inline DensityMatrix bell_state() {
  cvector psi = cvector::Zero(4);
  psi[0] = 1.0 / std::sqrt(2.0);
  psi[3] = 1.0 / std::sqrt(2.0);
  return DensityMatrix({2, 2}, psi * psi.adjoint());
}

inline double max_abs_diff(const cmatrix& a, const cmatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Staircase embedding oracle: level 0 is the shared ground pattern of N-1
// qubits, level n (n >= 1) is the single excitation of qubit n. Expanding a
// {2, N} state into the full 2 * 2^(N-1) register and applying the standard
// partial trace gives the reference the compact staircase reduction must
// reproduce. Usable for small N only.
// ---------------------------------------------------------------------------

/// Index of level n inside the (N-1)-qubit register (factor 1 of the
/// embedded state is qubit E_1, most significant).
inline long long staircase_level_index(int n, int n_levels) {
  if (n == 0) return 0;
  return 1ll << (n_levels - 1 - n);
}

/// rho_SE (dims {2, N}) embedded on dims {2, 2, ..., 2} with N-1 env qubits.
inline DensityMatrix embed_staircase(const DensityMatrix& rho_se) {
  const int n = rho_se.dims().at(1);
  const long long env_dim = 1ll << (n - 1);
  const long long full = 2 * env_dim;
  cmatrix out = cmatrix::Zero(full, full);
  const cmatrix& m = rho_se.matrix();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          out(i * env_dim + staircase_level_index(a, n),
              j * env_dim + staircase_level_index(b, n)) = m(i * n + a, j * n + b);
        }
      }
    }
  }
  std::vector<int> dims(static_cast<std::size_t>(n), 2);
  return DensityMatrix(std::move(dims), std::move(out), rho_se.tolerance());
}

/// Reference system-fragment state: embed, trace out the complement qubits,
/// then read the surviving single-excitation block back in the compact
/// ordering {ground, members...}. Also checks (via the returned residual)
/// that no weight leaked outside that subspace.
struct EmbeddedReduction {
  cmatrix compact;  // 2(|F|+1) x 2(|F|+1), same basis as staircase_trace
  double outside_weight = 0.0;
  DensityMatrix traced;  // the full reduced state on dims {2, 2, ..., 2}
};

inline EmbeddedReduction embedded_staircase_reduction(const DensityMatrix& rho_se,
                                                      const FragmentSelection& fragment) {
  const int n = rho_se.dims().at(1);
  const DensityMatrix embedded = embed_staircase(rho_se);
  std::vector<int> keep{0};
  for (int member : fragment.members) keep.push_back(member);
  EmbeddedReduction result{cmatrix(), 0.0, partial_trace(embedded, keep)};

  const int nf = static_cast<int>(fragment.members.size());
  const long long env_dim = 1ll << nf;
  // Compact basis element j corresponds to the excitation of the j-th kept
  // qubit; kept qubits keep their relative (ascending) order.
  std::vector<long long> basis{0};
  for (int j = 1; j <= nf; ++j) basis.push_back(1ll << (nf - j));

  const cmatrix& m = result.traced.matrix();
  const int nk = nf + 1;
  result.compact = cmatrix::Zero(2 * nk, 2 * nk);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
          result.compact(i * nk + a, j * nk + b) = m(i * env_dim + basis[a], j * env_dim + basis[b]);
        }
      }
    }
  }

  // Weight of the reduced state outside the vacuum + single-excitation span.
  std::vector<bool> in_span(static_cast<std::size_t>(env_dim), false);
  for (long long idx : basis) in_span[static_cast<std::size_t>(idx)] = true;
  for (int i = 0; i < 2; ++i) {
    for (long long e = 0; e < env_dim; ++e) {
      if (in_span[static_cast<std::size_t>(e)]) continue;
      result.outside_weight =
          std::max(result.outside_weight, std::abs(m(i * env_dim + e, i * env_dim + e)));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Two-state discrimination oracle (Helstrom).
// ---------------------------------------------------------------------------

/// Optimal discrimination error (1 - |p0 rho0 - p1 rho1|_1) / 2.
inline double helstrom_error(double p0, const cmatrix& rho0, double p1, const cmatrix& rho1) {
  return 0.5 * (1.0 - hermitian_trace_norm(p0 * rho0 - p1 * rho1));
}

/// The optimal projector pair: Pi_0 projects on the nonnegative eigenspace
/// of p0 rho0 - p1 rho1, Pi_1 on the rest.
inline std::pair<cmatrix, cmatrix> helstrom_projectors(double p0, const cmatrix& rho0, double p1,
                                                       const cmatrix& rho1) {
  const cmatrix gap = p0 * rho0 - p1 * rho1;
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(gap);
  const Eigen::Index dim = gap.rows();
  cmatrix pi0 = cmatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (solver.eigenvalues()[i] >= 0.0) {
      pi0 += solver.eigenvectors().col(i) * solver.eigenvectors().col(i).adjoint();
    }
  }
  return {pi0, cmatrix::Identity(dim, dim) - pi0};
}

}  // namespace qdlab::testing
