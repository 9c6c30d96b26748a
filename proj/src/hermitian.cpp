#include "clsig/hermitian.hpp"

#include "clsig/util.hpp"

#include <cmath>
#include <sstream>

namespace clsig {

HermitianForm::HermitianForm(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw input_error("Hermitian form must be square");
  }
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const std::complex<double>& v = m_(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw input_error("Hermitian form has a non-finite entry");
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  const double tol = 1e-12 * (1.0 + max_abs);
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i; j < m_.cols(); ++j) {
      if (std::abs(m_(i, j) - std::conj(m_(j, i))) > tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian at (" << i << "," << j << ")";
        throw input_error(os.str());
      }
    }
  }
}

double spectral_scale(const Eigen::MatrixXcd& m) {
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    scale = std::max(scale, row);
  }
  return scale;
}

InertiaResult inertia(const HermitianForm& h, double zero_threshold) {
  if (!(zero_threshold > 0.0 && zero_threshold < 1.0)) {
    throw input_error("zero threshold must lie in (0, 1)");
  }
  InertiaResult r;
  if (h.dim() == 0) return r;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigenvalue computation failed to converge");
  }
  const double cut = zero_threshold * spectral_scale(h.matrix());
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= cut) {
      ++r.nullity;
    } else if (ev[i] > 0.0) {
      ++r.n_pos;
    } else {
      ++r.n_neg;
    }
  }
  r.signature = r.n_pos - r.n_neg;
  return r;
}

}  // namespace clsig
