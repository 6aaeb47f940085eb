#include "qdlab/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qdlab {

Propagator::Propagator(const HamiltonianSet& h) : dims_{2, h.n_levels} {
  if (h.n_levels < 1) throw std::invalid_argument("Propagator: HamiltonianSet has no levels");
  if (h.eigenvalues.size() != h.h_total.rows() || h.eigenvectors.rows() != h.h_total.rows()) {
    init(h.h_total);
    return;
  }
  eigenvalues_ = h.eigenvalues;
  eigenvectors_ = h.eigenvectors;
  const double defect = max_abs(eigenvectors_ * eigenvalues_.asDiagonal().toDenseMatrix().cast<complexd>() *
                                    eigenvectors_.adjoint() -
                                h.h_total);
  if (defect > 1e-10) {
    throw validation_error("Propagator: cached spectrum does not reconstruct H_total, defect = " +
                           std::to_string(defect));
  }
}

Propagator::Propagator(const Eigen::MatrixXcd& hamiltonian, std::vector<int> dims)
    : dims_(std::move(dims)) {
  long long total = 1;
  for (int d : dims_) total *= d;
  if (hamiltonian.rows() != total || hamiltonian.cols() != total) {
    throw std::invalid_argument("Propagator: Hamiltonian size does not match dims");
  }
  if (max_abs(hamiltonian - hamiltonian.adjoint()) > 1e-10) {
    throw validation_error("Propagator: Hamiltonian is not Hermitian");
  }
  init(hamiltonian);
}

void Propagator::init(const Eigen::MatrixXcd& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(hamiltonian);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

cmatrix Propagator::unitary(double t) const {
  cvector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    phases[k] = std::polar(1.0, -eigenvalues_[k] * t);
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

DensityMatrix Propagator::evolve(const DensityMatrix& rho0, double t) const {
  return prepare(rho0).at(t);
}

PreparedState Propagator::prepare(const DensityMatrix& rho0, bool force_dense) const {
  if (rho0.dims() != dims_) {
    throw std::invalid_argument("Propagator: state dims do not match Hamiltonian dims");
  }
  PreparedState prep;
  prep.prop_ = this;
  prep.dims_ = rho0.dims();
  prep.tolerance_ = rho0.tolerance();

  Eigen::SelfAdjointEigenSolver<cmatrix> solver(rho0.matrix());
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::Index top = evals.size() - 1;
  const double second = evals.size() > 1 ? evals[top - 1] : 0.0;
  const bool rank_one = !force_dense && std::abs(evals[top] - 1.0) < 1e-10 && second < 1e-10;

  if (rank_one) {
    prep.pure_ = true;
    prep.psi_eig_ = eigenvectors_.adjoint() * solver.eigenvectors().col(top);
  } else {
    prep.pure_ = false;
    prep.m_eig_ = eigenvectors_.adjoint() * rho0.matrix() * eigenvectors_;
    prep.kernel_cache_ = std::make_shared<PreparedState::KernelCache>();
  }
  return prep;
}

cvector PreparedState::phases(double t) const {
  const Eigen::VectorXd& evals = prop_->eigenvalues();
  cvector ph(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    ph[k] = std::polar(1.0, -evals[k] * t);
  }
  return ph;
}

DensityMatrix PreparedState::at(double t) const { return at(t, tolerance_); }

DensityMatrix PreparedState::at(double t, double tolerance) const {
  const cmatrix& v = prop_->eigenvectors();
  const cvector ph = phases(t);
  if (pure_) {
    const cvector psi_t = v * (ph.asDiagonal() * psi_eig_);
    cmatrix rho = psi_t * psi_t.adjoint();
    return DensityMatrix(dims_, std::move(rho), tolerance);
  }
  // rho(t) = V (M .* P(t)) V^dag with P[a,b] = exp(-i (l_a - l_b) t).
  cmatrix w = m_eig_;
  for (Eigen::Index a = 0; a < w.rows(); ++a) {
    for (Eigen::Index b = 0; b < w.cols(); ++b) {
      w(a, b) *= ph[a] * std::conj(ph[b]);
    }
  }
  cmatrix rho = v * w * v.adjoint();
  return DensityMatrix(dims_, std::move(rho), tolerance);
}

cmatrix PreparedState::reduced_first_factor_at(double t) const {
  const cmatrix& v = prop_->eigenvectors();
  const int d_first = dims_.front();
  long long d_rest = 1;
  for (std::size_t f = 1; f < dims_.size(); ++f) d_rest *= dims_[f];
  const cvector ph = phases(t);

  cmatrix out = cmatrix::Zero(d_first, d_first);
  if (pure_) {
    const cvector psi_t = v * (ph.asDiagonal() * psi_eig_);
    for (int i = 0; i < d_first; ++i) {
      for (int j = 0; j < d_first; ++j) {
        complexd sum(0.0, 0.0);
        for (long long n = 0; n < d_rest; ++n) {
          sum += psi_t[i * d_rest + n] * std::conj(psi_t[j * d_rest + n]);
        }
        out(i, j) = sum;
      }
    }
    return out;
  }

  const Eigen::Index dim = v.rows();
  std::call_once(kernel_cache_->once, [&] {
    auto& kernels = kernel_cache_->kernels;
    kernels.resize(static_cast<std::size_t>(d_first) * d_first);
    for (int i = 0; i < d_first; ++i) {
      for (int j = 0; j < d_first; ++j) {
        cmatrix kernel = cmatrix::Zero(dim, dim);
        for (long long n = 0; n < d_rest; ++n) {
          kernel.noalias() +=
              v.row(i * d_rest + n).transpose() * v.row(j * d_rest + n).conjugate();
        }
        kernels[static_cast<std::size_t>(i) * d_first + j] = std::move(kernel);
      }
    }
  });

  cmatrix w = m_eig_;
  for (Eigen::Index a = 0; a < w.rows(); ++a) {
    for (Eigen::Index b = 0; b < w.cols(); ++b) {
      w(a, b) *= ph[a] * std::conj(ph[b]);
    }
  }
  const auto& kernels = kernel_cache_->kernels;
  for (int i = 0; i < d_first; ++i) {
    for (int j = 0; j < d_first; ++j) {
      out(i, j) = (w.cwiseProduct(kernels[static_cast<std::size_t>(i) * d_first + j])).sum();
    }
  }
  return out;
}

std::vector<ObservableRecord> observables_series(const DensityMatrix& rho0,
                                                 const HamiltonianSet& h,
                                                 const std::vector<double>& times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      throw std::invalid_argument("observables_series: time grid must be strictly increasing");
    }
  }
  Propagator prop(h);
  PreparedState prep = prop.prepare(rho0);

  std::vector<ObservableRecord> records;
  records.reserve(times.size());
  for (double t : times) {
    const cmatrix rho_s = prep.reduced_first_factor_at(t);
    ObservableRecord rec;
    rec.t = t;
    rec.system_entropy = entropy_of_hermitian(rho_s, rho0.tolerance());
    rec.excited_population = rho_s(1, 1).real();
    rec.coherence_abs = std::abs(rho_s(0, 1));
    records.push_back(rec);
  }
  return records;
}

}  // namespace qdlab
