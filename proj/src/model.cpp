#include "qdlab/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "qdlab/rng.hpp"

namespace qdlab {

void ModelParams::validate() const {
  if (delta_E <= 0.0) throw config_error("delta_E must be > 0");
  if (delta_eps < 0.0) throw config_error("delta_eps must be >= 0");
  if (N < 2) throw config_error("N must be >= 2, got " + std::to_string(N));
  if (beta < 0.0) throw config_error("beta must be >= 0");
  if (lambda < 0.0) throw config_error("lambda must be >= 0");
}

Eigen::MatrixXd goe_sample(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("goe_sample: n must be >= 1");
  SplitMix64 rng(seed);
  Eigen::MatrixXd x(n, n);
  const double sqrt2 = std::sqrt(2.0);
  // Upper triangle row-major, diagonal included, then mirror; the fill
  // order is part of the documented per-seed reproducibility contract.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double g = rng.next_gaussian();
      if (i == j) {
        x(i, i) = sqrt2 * g;
      } else {
        x(i, j) = g;
        x(j, i) = g;
      }
    }
  }
  return x / std::sqrt(8.0 * n);
}

HamiltonianSet build_hamiltonians(const ModelParams& params, const Eigen::MatrixXd& coupling) {
  params.validate();
  const int n = params.N;
  if (coupling.rows() != n || coupling.cols() != n) {
    throw std::invalid_argument("build_hamiltonians: coupling must be NxN");
  }
  if ((coupling - coupling.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("build_hamiltonians: coupling must be symmetric");
  }

  HamiltonianSet h;
  h.n_levels = n;

  // Qubit basis ordered (ground, excited): |1> sits delta_E above |0>, so
  // <1|rho_S|1> is the excited population that a cold environment drains.
  Eigen::Matrix2cd splitting = Eigen::Matrix2cd::Zero();
  splitting(0, 0) = -1.0;
  splitting(1, 1) = 1.0;
  Eigen::Matrix2cd sigma_x = Eigen::Matrix2cd::Zero();
  sigma_x(0, 1) = 1.0;
  sigma_x(1, 0) = 1.0;

  h.h_system = 0.5 * params.delta_E * splitting;

  // Levels spaced delta_eps/(N-1) apart from -delta_eps/2 to +delta_eps/2.
  Eigen::VectorXd energies(n);
  const double step = params.delta_eps / static_cast<double>(n - 1);
  for (int k = 0; k < n; ++k) {
    energies[k] = -0.5 * params.delta_eps + step * k;
  }
  h.h_environment = energies.cast<complexd>().asDiagonal();

  const Eigen::MatrixXcd coupling_c = (params.lambda * coupling).cast<complexd>();
  h.h_interaction = Eigen::kroneckerProduct(sigma_x, coupling_c);

  h.h_total = Eigen::kroneckerProduct(h.h_system, Eigen::MatrixXcd::Identity(n, n)) +
              Eigen::kroneckerProduct(Eigen::Matrix2cd::Identity(), h.h_environment) +
              h.h_interaction;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.h_total);
  h.eigenvalues = solver.eigenvalues();
  h.eigenvectors = solver.eigenvectors();
  return h;
}

DensityMatrix initial_state(const ModelParams& params) {
  params.validate();
  const int n = params.N;

  Eigen::Vector2cd psi_s;
  psi_s << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Eigen::Matrix2cd rho_s = psi_s * psi_s.adjoint();

  cmatrix rho_e;
  if (params.env_init == EnvInit::Superposition) {
    cvector psi_e = cvector::Constant(n, complexd(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    rho_e = psi_e * psi_e.adjoint();
  } else {
    const double step = params.delta_eps / static_cast<double>(n - 1);
    Eigen::VectorXd weights(n);
    for (int k = 0; k < n; ++k) {
      const double energy = -0.5 * params.delta_eps + step * k;
      // Shift by the ground energy so the largest weight is exactly 1.
      weights[k] = std::exp(-params.beta * (energy + 0.5 * params.delta_eps));
    }
    weights /= weights.sum();
    rho_e = weights.cast<complexd>().asDiagonal();
  }

  cmatrix joint = Eigen::kroneckerProduct(rho_s, rho_e);
  return DensityMatrix({2, n}, std::move(joint));
}

}  // namespace qdlab
