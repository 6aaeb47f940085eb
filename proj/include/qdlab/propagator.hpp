#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "qdlab/density_matrix.hpp"
#include "qdlab/model.hpp"

namespace qdlab {

class Propagator;

/// An initial state prepared for repeated evaluation at many times.
///
/// Rank-one inputs are carried as a state vector (the evolved joint state is
/// then exactly rank one at every t); mixed inputs are carried as the
/// eigenbasis-rotated matrix so each snapshot costs two dense products.
class PreparedState {
 public:
  /// rho(t), with the same factor structure and tolerance as the input.
  DensityMatrix at(double t) const;

  /// rho(t) validated at an explicit tolerance (sweeps relax the bar for
  /// late snapshots).
  DensityMatrix at(double t, double tolerance) const;

  /// tr over all factors but the first, computed without forming rho(t).
  cmatrix reduced_first_factor_at(double t) const;

  bool is_pure_path() const { return pure_; }

 private:
  friend class Propagator;
  PreparedState() = default;

  const Propagator* prop_ = nullptr;
  std::vector<int> dims_;
  double tolerance_ = kDefaultTolerance;
  bool pure_ = false;
  cvector psi_eig_;  // V^dag |psi0>, pure path
  cmatrix m_eig_;    // V^dag rho0 V, dense path
  // Per first-factor index pair (i,j): C[a,b] = sum_n V[(i,n),a] conj(V[(j,n),b]),
  // so that rho_S(t)[i,j] = sum_ab W(t)[a,b] C[a,b]. Built on first use.
  struct KernelCache {
    std::once_flag once;
    std::vector<cmatrix> kernels;
  };
  std::shared_ptr<KernelCache> kernel_cache_;

  cvector phases(double t) const;
};

/// Exact propagation under a time-independent Hermitian total Hamiltonian,
/// U(t) = V exp(-i Lambda t) V^dag from a one-time eigendecomposition
/// (hbar = 1). Immutable after construction; safe to share across threads.
class Propagator {
 public:
  /// Reuses the spectrum cached in the HamiltonianSet.
  explicit Propagator(const HamiltonianSet& h);

  /// Decomposes an arbitrary Hermitian matrix over the given factor dims.
  Propagator(const Eigen::MatrixXcd& hamiltonian, std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const cmatrix& eigenvectors() const { return eigenvectors_; }

  /// U(t).
  cmatrix unitary(double t) const;

  /// U(t) rho0 U(t)^dag.
  DensityMatrix evolve(const DensityMatrix& rho0, double t) const;

  /// Prepares rho0 for repeated snapshots. force_dense skips the rank-one
  /// fast path (used by equivalence tests).
  PreparedState prepare(const DensityMatrix& rho0, bool force_dense = false) const;

 private:
  void init(const Eigen::MatrixXcd& hamiltonian);

  std::vector<int> dims_;
  Eigen::VectorXd eigenvalues_;
  cmatrix eigenvectors_;
};

/// One row of the system-dynamics series.
struct ObservableRecord {
  double t = 0.0;
  double system_entropy = 0.0;      // H(S) in bits
  double excited_population = 0.0;  // <1|rho_S|1>
  double coherence_abs = 0.0;       // |<0|rho_S|1>|
};

/// H(S), excited population and coherence magnitude on a monotone time grid.
std::vector<ObservableRecord> observables_series(const DensityMatrix& rho0,
                                                 const HamiltonianSet& h,
                                                 const std::vector<double>& times);

}  // namespace qdlab
