#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qdlab/density_matrix.hpp"

namespace qdlab {

enum class EnvInit { Superposition, Thermal };
enum class SysInit { PlusSuperposition };

/// Physical knobs of the qubit + N-level random-matrix model.
struct ModelParams {
  double delta_E = 1.0;    // system level splitting
  double delta_eps = 1.0;  // environment bandwidth
  double lambda = 0.2;     // coupling strength
  int N = 10;              // environment levels
  double beta = 10.0;      // inverse temperature for the thermal choice
  EnvInit env_init = EnvInit::Superposition;
  SysInit sys_init = SysInit::PlusSuperposition;
  std::uint64_t seed = 1;

  /// Throws config_error on out-of-range values.
  void validate() const;
};

/// The three Hamiltonian pieces, their sum, and the cached spectral
/// decomposition of the total used by the propagator.
struct HamiltonianSet {
  Eigen::MatrixXcd h_system;       // 2x2
  Eigen::MatrixXcd h_environment;  // NxN, diagonal
  Eigen::MatrixXcd h_interaction;  // 2Nx2N
  Eigen::MatrixXcd h_total;        // 2Nx2N
  Eigen::VectorXd eigenvalues;     // of h_total
  Eigen::MatrixXcd eigenvectors;
  int n_levels = 0;

  /// Equally spaced environment level energies from -delta_eps/2 up.
  Eigen::VectorXd level_energies() const { return h_environment.diagonal().real(); }
};

/// N x N real symmetric matrix R = X / sqrt(8N) with X_ij ~ N(0,1) off the
/// diagonal and X_ii ~ sqrt(2) N(0,1). Deterministic for a fixed seed.
Eigen::MatrixXd goe_sample(int n, std::uint64_t seed);

/// Assembles H_S = (dE/2) sigma_z, the equally spaced diagonal H_E,
/// H_SE = sigma_x (x) lambda R, and their sum with its spectrum.
/// Throws std::invalid_argument if `coupling` is not symmetric NxN.
HamiltonianSet build_hamiltonians(const ModelParams& params, const Eigen::MatrixXd& coupling);

/// rho_S(0) (x) rho_E(0) on dims {2, N}: system in |+><+|, environment in
/// the uniform superposition or the Gibbs state of H_E.
DensityMatrix initial_state(const ModelParams& params);

}  // namespace qdlab
