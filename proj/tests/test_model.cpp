#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "helpers.hpp"
#include "qdlab/model.hpp"

using namespace qdlab;
using namespace qdlab::testing;

TEST_CASE("goe sample is symmetric and reproducible") {
  const Eigen::MatrixXd r1 = goe_sample(12, 99);
  const Eigen::MatrixXd r2 = goe_sample(12, 99);
  CHECK((r1 - r1.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1 - r2).cwiseAbs().maxCoeff() == 0.0);  // bit-identical per seed
  const Eigen::MatrixXd r3 = goe_sample(12, 100);
  CHECK((r1 - r3).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("goe entry variances match the stated distribution") {
  const int n = 10;
  const int samples = 10000;
  double off_sum = 0.0, off_sq = 0.0, diag_sum = 0.0, diag_sq = 0.0;
  long long off_count = 0, diag_count = 0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::MatrixXd r = goe_sample(n, 1000 + static_cast<std::uint64_t>(s));
    for (int i = 0; i < n; ++i) {
      diag_sum += r(i, i);
      diag_sq += r(i, i) * r(i, i);
      ++diag_count;
      for (int j = i + 1; j < n; ++j) {
        off_sum += r(i, j);
        off_sq += r(i, j) * r(i, j);
        ++off_count;
      }
    }
  }
  const double off_var = off_sq / off_count - std::pow(off_sum / off_count, 2);
  const double diag_var = diag_sq / diag_count - std::pow(diag_sum / diag_count, 2);
  // R = X / sqrt(8N): off-diagonal variance 1/(8N), diagonal 2/(8N).
  CHECK(off_var == doctest::Approx(1.0 / 80.0).epsilon(0.05));
  CHECK(diag_var == doctest::Approx(2.0 / 80.0).epsilon(0.05));
}

TEST_CASE("goe spectral radius follows the semicircle scaling") {
  // Radius 2 sigma sqrt(N) with sigma^2 = 1/(8N): 1/sqrt(2), +-10%.
  const Eigen::MatrixXd r = goe_sample(200, 4242);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r, Eigen::EigenvaluesOnly);
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(radius == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("hamiltonian assembly") {
  ModelParams params;
  params.N = 3;
  const HamiltonianSet h = build_hamiltonians(params, goe_sample(3, 5));

  const Eigen::VectorXd energies = h.level_energies();
  CHECK(energies[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(energies[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(energies[2] == doctest::Approx(0.5).epsilon(1e-15));

  Eigen::SelfAdjointEigenSolver<cmatrix> sys(h.h_system, Eigen::EigenvaluesOnly);
  CHECK(sys.eigenvalues()[0] == doctest::Approx(-0.5));
  CHECK(sys.eigenvalues()[1] == doctest::Approx(0.5));

  // H_total equals the sum of its parts.
  const cmatrix sum =
      Eigen::kroneckerProduct(h.h_system, cmatrix::Identity(3, 3)) +
      Eigen::kroneckerProduct(Eigen::Matrix2cd::Identity(), h.h_environment) + h.h_interaction;
  CHECK(max_abs_diff(h.h_total, sum) < 1e-12);

  // All pieces Hermitian.
  for (const cmatrix* m : {&h.h_system, &h.h_environment, &h.h_interaction, &h.h_total}) {
    CHECK(max_abs(*m - m->adjoint()) < 1e-14);
  }

  // Cached spectrum reconstructs H_total.
  const cmatrix rebuilt = h.eigenvectors *
                          h.eigenvalues.cast<complexd>().asDiagonal() *
                          h.eigenvectors.adjoint();
  CHECK(max_abs_diff(rebuilt, h.h_total) < 1e-12);
}

TEST_CASE("decoupled limit commutes with the system Hamiltonian") {
  ModelParams params;
  params.N = 4;
  params.lambda = 0.0;
  const HamiltonianSet h = build_hamiltonians(params, goe_sample(4, 6));
  const cmatrix hs_full = Eigen::kroneckerProduct(h.h_system, cmatrix::Identity(4, 4));
  CHECK(max_abs_diff(hs_full * h.h_total, h.h_total * hs_full) < 1e-14);
  // Off-diagonal system blocks vanish.
  CHECK(max_abs(h.h_total.block(0, 4, 4, 4)) == 0.0);
}

TEST_CASE("asymmetric coupling is rejected") {
  ModelParams params;
  params.N = 3;
  Eigen::MatrixXd bad = goe_sample(3, 7);
  bad(0, 1) += 0.1;
  CHECK_THROWS_AS(build_hamiltonians(params, bad), std::invalid_argument);
  CHECK_THROWS_AS(build_hamiltonians(params, Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("superposition initial state") {
  ModelParams params;
  params.N = 2;
  params.env_init = EnvInit::Superposition;
  const DensityMatrix rho = initial_state(params);
  CHECK(rho.dims() == std::vector<int>{2, 2});

  const DensityMatrix env = partial_trace(rho, {1});
  CHECK(max_abs_diff(env.matrix(), cmatrix::Constant(2, 2, 0.5)) < 1e-14);

  const DensityMatrix sys = partial_trace(rho, {0});
  CHECK(sys.matrix()(0, 1).real() == doctest::Approx(0.5));
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal initial state") {
  ModelParams params;
  params.N = 10;
  params.env_init = EnvInit::Thermal;

  SUBCASE("infinite temperature is maximally mixed") {
    params.beta = 0.0;
    const DensityMatrix rho = initial_state(params);
    const DensityMatrix env = partial_trace(rho, {1});
    CHECK(max_abs_diff(env.matrix(), cmatrix::Identity(10, 10) / 10.0) < 1e-14);
  }

  SUBCASE("beta = 10 matches the direct Gibbs evaluation") {
    params.beta = 10.0;
    const DensityMatrix rho = initial_state(params);
    const DensityMatrix env = partial_trace(rho, {1});

    const Eigen::VectorXd energies =
        build_hamiltonians(params, goe_sample(10, 1)).level_energies();
    double z = 0.0;
    for (int k = 0; k < 10; ++k) z += std::exp(-params.beta * energies[k]);
    for (int k = 0; k < 10; ++k) {
      CHECK(env.matrix()(k, k).real() ==
            doctest::Approx(std::exp(-params.beta * energies[k]) / z).epsilon(1e-12));
    }
    // Ground-level population e^{5}/Z in these units.
    CHECK(env.matrix()(0, 0).real() == doctest::Approx(std::exp(5.0) / z).epsilon(1e-12));

    // Populations decrease with level energy; the state is genuinely mixed.
    for (int k = 1; k < 10; ++k) {
      CHECK(env.matrix()(k, k).real() < env.matrix()(k - 1, k - 1).real());
    }
    CHECK(purity(rho) < 1.0 - 1e-6);
  }
}

TEST_CASE("parameter validation") {
  ModelParams params;
  params.N = 1;
  CHECK_THROWS_AS(params.validate(), config_error);
  params.N = 10;
  params.delta_E = 0.0;
  CHECK_THROWS_AS(params.validate(), config_error);
  params.delta_E = 1.0;
  params.lambda = -0.1;
  CHECK_THROWS_AS(params.validate(), config_error);
  params.lambda = 0.2;
  params.beta = -1.0;
  CHECK_THROWS_AS(params.validate(), config_error);
}
