#include "qdlab/density_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <utility>

namespace qdlab {

namespace {

long long product_of(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return p;
}

}  // namespace

BlochVector::BlochVector(const Eigen::Vector3d& r) : r_(r) {
  if (std::abs(r_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("BlochVector: |r| must be 1 within 1e-12, got norm " +
                                std::to_string(r_.norm()));
  }
}

BlochVector BlochVector::normalized(const Eigen::Vector3d& r) {
  const double n = r.norm();
  if (n < 1e-9) throw std::invalid_argument("BlochVector: cannot normalize near-zero vector");
  return BlochVector(Eigen::Vector3d(r / n));
}

Eigen::Matrix2cd BlochVector::dot_sigma() const {
  Eigen::Matrix2cd m;
  m(0, 0) = complexd(r_.z(), 0.0);
  m(0, 1) = complexd(r_.x(), -r_.y());
  m(1, 0) = complexd(r_.x(), r_.y());
  m(1, 1) = complexd(-r_.z(), 0.0);
  return m;
}

Eigen::Matrix2cd BlochVector::projector(int sign) const {
  const double s = sign >= 0 ? 1.0 : -1.0;
  return 0.5 * (Eigen::Matrix2cd::Identity() + s * dot_sigma());
}

DensityMatrix::DensityMatrix(std::vector<int> dims, cmatrix entries, double tolerance)
    : dims_(std::move(dims)), entries_(std::move(entries)), tolerance_(tolerance), zero_(false) {
  if (dims_.empty()) throw std::invalid_argument("DensityMatrix: empty dims");
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("DensityMatrix: factor dimensions must be >= 1");
  }
  if (tolerance_ < 0.0) throw std::invalid_argument("DensityMatrix: negative tolerance");
  const long long total = product_of(dims_);
  if (entries_.rows() != total || entries_.cols() != total) {
    std::ostringstream os;
    os << "DensityMatrix: entries are " << entries_.rows() << "x" << entries_.cols()
       << " but dims imply " << total << "x" << total;
    throw std::invalid_argument(os.str());
  }

  const double herm_defect = max_abs(entries_ - entries_.adjoint());
  if (herm_defect > tolerance_) {
    throw validation_error("DensityMatrix: not Hermitian, max|rho - rho^dag| = " +
                           std::to_string(herm_defect));
  }
  const complexd tr = entries_.trace();
  if (std::abs(tr - 1.0) <= tolerance_) {
    zero_ = false;
  } else if (std::abs(tr) <= tolerance_) {
    // Trace-zero values must be the zero matrix, not a traceless operator.
    if (max_abs(entries_) > tolerance_) {
      throw validation_error("DensityMatrix: trace ~0 but entries are not all zero");
    }
    zero_ = true;
  } else {
    throw validation_error("DensityMatrix: trace must be 1 (or exactly 0), got " +
                           std::to_string(tr.real()));
  }
}

DensityMatrix DensityMatrix::zero(std::vector<int> dims, double tolerance) {
  const long long total = product_of(dims);
  return DensityMatrix(std::move(dims), cmatrix::Zero(total, total), tolerance);
}

DensityMatrix DensityMatrix::with_tolerance(double tolerance) const {
  return DensityMatrix(dims_, entries_, tolerance);
}

double max_abs(const cmatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double entropy_of_hermitian(const cmatrix& h, double tolerance) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& evals = solver.eigenvalues();
  if (evals.size() > 0 && evals.minCoeff() < -tolerance) {
    throw validation_error("entropy: eigenvalue " + std::to_string(evals.minCoeff()) +
                           " below -tolerance");
  }
  double bits = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double p = evals[i];
    if (p > kEigenvalueClip) bits -= p * std::log2(p);
  }
  return bits;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (rho.is_zero()) return 0.0;
  return entropy_of_hermitian(rho.matrix(), rho.tolerance());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.dims();
  const int n_factors = static_cast<int>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  for (int f : keep) {
    if (f < 0 || f >= n_factors) {
      throw std::invalid_argument("partial_trace: factor index " + std::to_string(f) +
                                  " out of range");
    }
    if (kept[static_cast<std::size_t>(f)]) {
      throw std::invalid_argument("partial_trace: duplicate factor index");
    }
    kept[static_cast<std::size_t>(f)] = true;
  }

  // Kronecker order: factor 0 is most significant.
  std::vector<long long> stride(dims.size());
  long long acc = 1;
  for (int f = n_factors - 1; f >= 0; --f) {
    stride[static_cast<std::size_t>(f)] = acc;
    acc *= dims[static_cast<std::size_t>(f)];
  }

  std::vector<int> kept_dims, traced_dims;
  std::vector<long long> kept_strides, traced_strides;
  for (int f = 0; f < n_factors; ++f) {
    if (kept[static_cast<std::size_t>(f)]) {
      kept_dims.push_back(dims[static_cast<std::size_t>(f)]);
      kept_strides.push_back(stride[static_cast<std::size_t>(f)]);
    } else {
      traced_dims.push_back(dims[static_cast<std::size_t>(f)]);
      traced_strides.push_back(stride[static_cast<std::size_t>(f)]);
    }
  }

  // Full-matrix offset of every composite kept index / traced index.
  auto offsets = [](const std::vector<int>& sub_dims, const std::vector<long long>& sub_strides) {
    long long count = 1;
    for (int d : sub_dims) count *= d;
    std::vector<long long> out(static_cast<std::size_t>(count), 0);
    for (long long idx = 0; idx < count; ++idx) {
      long long rem = idx, off = 0;
      for (int f = static_cast<int>(sub_dims.size()) - 1; f >= 0; --f) {
        const long long digit = rem % sub_dims[static_cast<std::size_t>(f)];
        rem /= sub_dims[static_cast<std::size_t>(f)];
        off += digit * sub_strides[static_cast<std::size_t>(f)];
      }
      out[static_cast<std::size_t>(idx)] = off;
    }
    return out;
  };
  const std::vector<long long> kept_offset = offsets(kept_dims, kept_strides);
  const std::vector<long long> traced_offset = offsets(traced_dims, traced_strides);

  const long long kept_total = static_cast<long long>(kept_offset.size());
  cmatrix out = cmatrix::Zero(kept_total, kept_total);
  const cmatrix& m = rho.matrix();
  for (long long r = 0; r < kept_total; ++r) {
    for (long long c = 0; c < kept_total; ++c) {
      complexd sum(0.0, 0.0);
      for (long long t : traced_offset) {
        sum += m(kept_offset[static_cast<std::size_t>(r)] + t,
                 kept_offset[static_cast<std::size_t>(c)] + t);
      }
      out(r, c) = sum;
    }
  }

  std::vector<int> out_dims;
  for (int f = 0; f < n_factors; ++f) {
    if (kept[static_cast<std::size_t>(f)]) out_dims.push_back(dims[static_cast<std::size_t>(f)]);
  }
  if (out_dims.empty()) out_dims.push_back(1);
  return DensityMatrix(std::move(out_dims), std::move(out), rho.tolerance());
}

double trace_norm(const cmatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("trace_norm: matrix must be square");
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<cmatrix> svd(a);
  return svd.singularValues().sum();
}

double hermitian_trace_norm(const cmatrix& h) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

cmatrix psd_sqrt(const cmatrix& h, double tolerance) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(h);
  const Eigen::VectorXd& evals = solver.eigenvalues();
  if (evals.size() > 0 && evals.minCoeff() < -tolerance) {
    throw validation_error("psd_sqrt: eigenvalue " + std::to_string(evals.minCoeff()) +
                           " below -tolerance");
  }
  Eigen::VectorXd roots(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    roots[i] = evals[i] > kEigenvalueClip ? std::sqrt(evals[i]) : 0.0;
  }
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity_of_psd(const cmatrix& a, const cmatrix& b, double tolerance) {
  return trace_norm(psd_sqrt(a, tolerance) * psd_sqrt(b, tolerance));
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dims() != rho2.dims()) {
    throw std::invalid_argument("fidelity: dimension signatures differ");
  }
  return fidelity_of_psd(rho1.matrix(), rho2.matrix(),
                         std::max(rho1.tolerance(), rho2.tolerance()));
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().squaredNorm();
}

}  // namespace qdlab
