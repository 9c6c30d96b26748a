#pragma once

#include <Eigen/Dense>

namespace clsig {

// A validated complex Hermitian matrix. Construction checks squareness,
// finiteness of every entry, and conjugate symmetry up to an absolute
// tolerance of 1e-12 * (1 + max entry magnitude); violations raise
// input_error. The 0x0 form is legal.
class HermitianForm {
 public:
  explicit HermitianForm(Eigen::MatrixXcd entries);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Eigen::MatrixXcd m_;
};

struct InertiaResult {
  int signature = 0;
  int nullity = 0;
  int n_pos = 0;
  int n_neg = 0;
};

// max(1, largest absolute Gershgorin row sum) — a scale factor for the
// eigenvalue zero test that never divides by zero, even for empty or zero
// matrices.
double spectral_scale(const Eigen::MatrixXcd& m);

// Eigenvalue-based inertia: eigenvalues with |lambda| <= zero_threshold *
// spectral_scale count as null, the rest split into positive and negative.
// zero_threshold is relative and must lie in (0, 1). Deterministic for
// identical input.
InertiaResult inertia(const HermitianForm& h, double zero_threshold = 1e-9);

}  // namespace clsig
