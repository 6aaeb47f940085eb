#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qdlab/errors.hpp"

namespace qdlab {

using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using complexd = std::complex<double>;

/// Default numerical validation tolerance for states.
inline constexpr double kDefaultTolerance = 1e-9;

/// Eigenvalues below this are treated as exact zeros (0*log 0 terms,
/// matrix square roots). Chosen for the double-precision spectral noise
/// floor at the dimensions this library works with (<= a few thousand).
inline constexpr double kEigenvalueClip = 1e-12;

/// Unit vector on the Bloch sphere; parameterizes rank-one qubit projectors
/// (1 +- r.sigma)/2.
class BlochVector {
 public:
  /// Requires |r| = 1 within 1e-12.
  explicit BlochVector(const Eigen::Vector3d& r);

  /// Normalizes r (throws on a near-zero vector).
  static BlochVector normalized(const Eigen::Vector3d& r);

  const Eigen::Vector3d& coords() const { return r_; }
  double x() const { return r_.x(); }
  double y() const { return r_.y(); }
  double z() const { return r_.z(); }

  /// r . sigma as a 2x2 Hermitian matrix.
  Eigen::Matrix2cd dot_sigma() const;

  /// The projector (1 + s*r.sigma)/2 for s = +1 or -1.
  Eigen::Matrix2cd projector(int sign) const;

 private:
  Eigen::Vector3d r_;
};

/// Density operator over an explicit tensor-factor structure.
///
/// `dims` lists the factor dimensions in Kronecker order (first factor is
/// most significant), e.g. {2, N} for a qubit joined to an N-level
/// environment. Construction checks hermiticity and trace; positivity is
/// checked wherever a spectral decomposition is taken anyway.
///
/// The all-zero matrix is a legitimate value (the level-elimination trace
/// produces it when the kept block carries no weight); every entropy of it
/// is defined as 0.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, cmatrix entries, double tolerance = kDefaultTolerance);

  /// The trace-0 state on the given factor structure.
  static DensityMatrix zero(std::vector<int> dims, double tolerance = kDefaultTolerance);

  const std::vector<int>& dims() const { return dims_; }
  int factor_dim(int index) const { return dims_.at(static_cast<std::size_t>(index)); }
  int total_dim() const { return static_cast<int>(entries_.rows()); }
  const cmatrix& matrix() const { return entries_; }
  double tolerance() const { return tolerance_; }
  bool is_zero() const { return zero_; }

  /// Same entries, different validation tolerance (revalidates).
  DensityMatrix with_tolerance(double tolerance) const;

 private:
  std::vector<int> dims_;
  cmatrix entries_;
  double tolerance_;
  bool zero_;
};

/// -tr[rho log2 rho] in bits; 0 for the zero state.
/// Throws validation_error if rho has eigenvalues below -tolerance.
double von_neumann_entropy(const DensityMatrix& rho);

/// Standard partial trace keeping the listed factors (original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Sum of singular values.
double trace_norm(const cmatrix& a);

/// |sqrt(rho1) sqrt(rho2)|_1; square roots via Hermitian eigendecomposition
/// with negative eigenvalues clipped to zero.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// tr[rho^2].
double purity(const DensityMatrix& rho);

// Low-level kernels on raw Hermitian matrices. The measurement-search inner
// loops use these directly to skip repeated wrapper validation.

/// Entropy in bits of a Hermitian matrix given by its entries.
double entropy_of_hermitian(const cmatrix& h, double tolerance = kDefaultTolerance);

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
double hermitian_trace_norm(const cmatrix& h);

/// PSD square root with negative eigenvalues clipped to zero.
cmatrix psd_sqrt(const cmatrix& h, double tolerance = kDefaultTolerance);

/// Fidelity of two raw PSD matrices.
double fidelity_of_psd(const cmatrix& a, const cmatrix& b, double tolerance = kDefaultTolerance);

/// max |a(i,j)| over all entries.
double max_abs(const cmatrix& a);

}  // namespace qdlab
