#pragma once

#include "clsig/exact.hpp"
#include "clsig/hermitian.hpp"
#include "clsig/seifert.hpp"

#include <complex>
#include <string>
#include <vector>

namespace clsig {

// One coordinate of a torus point: an angle in turns, either an exact
// rational (Turns) or a floating double in [0, 1). Exactness is preserved so
// that degeneracy tests (angle 0) and special values (quarter turns) are
// decided exactly when the input was exact.
class Angle {
 public:
  Angle() : exact_(true), t_(), d_(0.0) {}

  static Angle turns(const Turns& t) { return Angle(t); }
  static Angle turns(long long num, long long den) { return Angle(Turns(num, den)); }
  static Angle decimal(double turns_value);  // reduced mod 1 into [0, 1)

  // Accepts "p/q" (exact rational turns) or a decimal literal.
  static Angle parse(const std::string& text);

  bool exact() const { return exact_; }
  const Turns& rational() const;  // throws std::logic_error when not exact
  double value() const { return exact_ ? t_.value() : d_; }
  bool is_zero() const { return exact_ ? t_.is_zero() : d_ == 0.0; }

  Angle conj() const;  // negated angle mod 1

  std::string str() const;  // "p/q" when exact, decimal otherwise

 private:
  explicit Angle(const Turns& t) : exact_(true), t_(t), d_(0.0) {}
  bool exact_;
  Turns t_;
  double d_;
};

// exp(2*pi*i*angle); exact at quarter turns.
std::complex<double> unit_circle(const Angle& a);

// A point of the n-torus, one angle per color.
struct TorusPoint {
  std::vector<Angle> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  bool in_star() const;    // no coordinate at angle 0
  bool all_exact() const;  // every coordinate an exact rational
  std::string str() const;
};

// The Hermitian form
//   H(w) = sum over sign vectors eps of  prod_i (1 - conj(w_i)^{eps_i}) * A^eps.
// For one color this is (1 - conj(w)) A + (1 - w) A^T. Assembled as P + P*
// over half the sign vectors so the result is exactly Hermitian.
HermitianForm cf_matrix(const ColoredSeifertData& d, const TorusPoint& w);

struct SigResult {
  int signature = 0;
  int nullity = 0;
  // True when some coordinate of the evaluation point sits at angle 0, i.e.
  // the naive form is evaluated outside its domain of honest meaning.
  bool degenerate_input = false;
};

// Inertia of cf_matrix at w. At points with a coordinate at angle 0 the naive
// (possibly degenerate) value is returned with degenerate_input set; callers
// needing the honest extended value must use sigma_hat.
SigResult cf_signature(const ColoredSeifertData& d, const TorusPoint& w,
                       double zero_threshold = 1e-9);

// Doubling map into the 2n-torus: coordinate i maps to the pair
//   z_i = w_i * exp(-i*pi/2)  (angle + 3/4),   z_{n+i} = exp(+i*pi/2) (angle 1/4),
// except w_i at angle 1/4 maps to z_i at 3/4 and z_{n+i} at 1/2.
// Guarantees z_i * z_{n+i} = w_i and no output coordinate at angle 0.
TorusPoint z_map(const TorusPoint& w);

// Extended signature: cf_signature of the doubled-link data at z_map(w).
// d_pm must carry exactly 2n colors, ordered as the n positive pushoffs
// followed by the n negative pushoffs of the original colors. Defined for
// every w, including points with coordinates at angle 0.
SigResult sigma_hat(const ColoredSeifertData& d_pm, const TorusPoint& w,
                    double zero_threshold = 1e-9);

}  // namespace clsig
