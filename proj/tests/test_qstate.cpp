#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace qdlab;
using namespace qdlab::testing;

namespace {

DensityMatrix qubit_diag(double p0, double p1) {
  cmatrix m = cmatrix::Zero(2, 2);
  m(0, 0) = p0;
  m(1, 1) = p1;
  return DensityMatrix({2}, m);
}

}  // namespace

TEST_CASE("construction validates hermiticity and trace") {
  cmatrix bad = cmatrix::Zero(2, 2);
  bad(0, 1) = complexd(0.3, 0.0);  // not Hermitian
  bad(0, 0) = 1.0;
  CHECK_THROWS_AS(DensityMatrix({2}, bad), validation_error);

  cmatrix half = cmatrix::Zero(2, 2);
  half(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, half), validation_error);

  // Trace ~0 must mean the all-zero matrix.
  cmatrix traceless = cmatrix::Zero(2, 2);
  traceless(0, 0) = 0.5;
  traceless(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, traceless), validation_error);
  CHECK(DensityMatrix::zero({2}).is_zero());

  CHECK_THROWS_AS(DensityMatrix({2, 2}, cmatrix::Identity(2, 2) * 0.5), std::invalid_argument);
}

TEST_CASE("generated states satisfy the state invariants") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    const DensityMatrix rho = random_state({2, 5}, 3, seed);
    const cmatrix& m = rho.matrix();
    CHECK(max_abs(m - m.adjoint()) <= 1e-10);
    CHECK(std::abs(m.trace().real() - 1.0) <= 1e-10);
    Eigen::SelfAdjointEigenSolver<cmatrix> solver(m, Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("entropy of pure and maximally mixed states") {
  CHECK(von_neumann_entropy(qubit_diag(1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(qubit_diag(0.5, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy matches the direct -sum p log2 p evaluation") {
  const double expected = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
  CHECK(von_neumann_entropy(qubit_diag(0.25, 0.75)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.811278124459).epsilon(1e-10));
}

TEST_CASE("entropy is basis invariant") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const DensityMatrix rho = random_state({6}, 4, seed);
    const cmatrix u = random_unitary(6, seed + 100);
    const DensityMatrix rotated({6}, u * rho.matrix() * u.adjoint());
    CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-10);
  }
}

TEST_CASE("entropy rejects states with a genuinely negative eigenvalue") {
  cmatrix m = cmatrix::Zero(2, 2);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  const DensityMatrix rho({2}, m, 1e-9);  // Hermitian, unit trace
  CHECK_THROWS_AS(von_neumann_entropy(rho), validation_error);
}

TEST_CASE("entropy of the zero state is zero") {
  CHECK(von_neumann_entropy(DensityMatrix::zero({2, 3})) == 0.0);
}

TEST_CASE("partial trace of a product state") {
  SplitMix64 rng(31);
  const cmatrix sigma = random_psd(3, 2, rng);
  cmatrix proj = cmatrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  const DensityMatrix rho({2, 3}, Eigen::kroneckerProduct(proj, sigma).eval());

  const DensityMatrix sys = partial_trace(rho, {0});
  CHECK(max_abs_diff(sys.matrix(), proj) < 1e-12);
  const DensityMatrix env = partial_trace(rho, {1});
  CHECK(max_abs_diff(env.matrix(), sigma) < 1e-12);
}

TEST_CASE("partial trace of the Bell state gives maximally mixed marginals") {
  const DensityMatrix bell = bell_state();
  for (int factor : {0, 1}) {
    const DensityMatrix reduced = partial_trace(bell, {factor});
    CHECK(max_abs_diff(reduced.matrix(), 0.5 * cmatrix::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("partial trace composes factor by factor") {
  const DensityMatrix rho = random_state({2, 3, 2}, 5, 41);
  const DensityMatrix step1 = partial_trace(rho, {0, 2});  // drop the middle factor
  const DensityMatrix step2 = partial_trace(step1, {0});   // then the last
  const DensityMatrix direct = partial_trace(rho, {0});
  CHECK(max_abs_diff(step2.matrix(), direct.matrix()) < 1e-12);
  CHECK(std::abs(step2.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("partial trace rejects bad factor indices") {
  const DensityMatrix rho = random_state({2, 3}, 2, 43);
  CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
}

TEST_CASE("trace norm basics") {
  CHECK(trace_norm(cmatrix::Zero(3, 3)) == doctest::Approx(0.0));
  cmatrix diag = cmatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  CHECK(trace_norm(diag) == doctest::Approx(2.0).epsilon(1e-12));

  // Coherence block of the Bell state: two entries of 1/2, eigenvalues +-1/2.
  cmatrix sigma = cmatrix::Zero(4, 4);
  sigma(0, 3) = 0.5;
  sigma(3, 0) = 0.5;
  CHECK(trace_norm(sigma) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hermitian_trace_norm(sigma) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace norm is unitarily invariant") {
  SplitMix64 rng(51);
  const cmatrix a = random_complex_matrix(5, 5, rng);
  const cmatrix u = random_unitary(5, 52);
  const cmatrix v = random_unitary(5, 53);
  CHECK(std::abs(trace_norm(u * a * v) - trace_norm(a)) < 1e-10);
}

TEST_CASE("fidelity closed forms") {
  const DensityMatrix rho = random_state({4}, 2, 61);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(fidelity(qubit_diag(1.0, 0.0), qubit_diag(0.0, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // B(I/2, |0><0|) = |sqrt(I/2) |0><0||_1 = 1/sqrt(2).
  CHECK(fidelity(qubit_diag(0.5, 0.5), qubit_diag(1.0, 0.0)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("fidelity is symmetric and bounded") {
  for (std::uint64_t seed : {71u, 72u, 73u}) {
    const DensityMatrix a = random_state({3}, 2, seed);
    const DensityMatrix b = random_state({3}, 3, seed + 10);
    const double fab = fidelity(a, b);
    const double fba = fidelity(b, a);
    CHECK(std::abs(fab - fba) < 1e-10);
    CHECK(fab >= -1e-10);
    CHECK(fab <= 1.0 + 1e-9);
  }
  CHECK_THROWS_AS(fidelity(random_state({2}, 1, 1), random_state({3}, 1, 1)),
                  std::invalid_argument);
}

TEST_CASE("purity") {
  CHECK(purity(qubit_diag(1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(purity(qubit_diag(0.5, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("bloch vectors") {
  CHECK_THROWS_AS(BlochVector(Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
  const BlochVector axis = BlochVector::normalized(Eigen::Vector3d(1.0, 2.0, -2.0));
  CHECK(axis.coords().norm() == doctest::Approx(1.0).epsilon(1e-14));

  const Eigen::Matrix2cd sum = axis.projector(+1) + axis.projector(-1);
  CHECK(max_abs(sum - Eigen::Matrix2cd::Identity()) < 1e-14);
  const Eigen::Matrix2cd diff = axis.projector(+1) - axis.projector(-1);
  CHECK(max_abs(diff - axis.dot_sigma()) < 1e-14);

  // Projectors are idempotent and orthogonal.
  CHECK(max_abs(axis.projector(+1) * axis.projector(+1) - axis.projector(+1)) < 1e-14);
  CHECK(max_abs(axis.projector(+1) * axis.projector(-1)) < 1e-14);
}

TEST_CASE("with_tolerance revalidates") {
  const DensityMatrix rho = random_state({2, 2}, 2, 81);
  const DensityMatrix loose = rho.with_tolerance(1e-6);
  CHECK(loose.tolerance() == 1e-6);
  CHECK(max_abs_diff(loose.matrix(), rho.matrix()) == 0.0);
}
