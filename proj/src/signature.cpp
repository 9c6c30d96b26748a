#include "clsig/signature.hpp"

#include "clsig/util.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace clsig {

Angle Angle::decimal(double turns_value) {
  if (!std::isfinite(turns_value)) throw input_error("angle must be finite");
  double r = turns_value - std::floor(turns_value);
  if (r >= 1.0) r = 0.0;  // floor rounding at the seam
  Angle a;
  a.exact_ = false;
  a.d_ = r;
  return a;
}

Angle Angle::parse(const std::string& text) {
  std::string s = text;
  // trim
  const char* ws = " \t";
  size_t b = s.find_first_not_of(ws);
  size_t e = s.find_last_not_of(ws);
  if (b == std::string::npos) throw input_error("empty angle");
  s = s.substr(b, e - b + 1);
  size_t slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      size_t used1 = 0, used2 = 0;
      long long num = std::stoll(s.substr(0, slash), &used1);
      std::string den_text = s.substr(slash + 1);
      long long den = std::stoll(den_text, &used2);
      if (used1 != slash || used2 != den_text.size()) {
        throw input_error("malformed rational angle: \"" + text + "\"");
      }
      return Angle::turns(num, den);
    }
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos) {
      size_t used = 0;
      long long num = std::stoll(s, &used);
      if (used != s.size()) throw input_error("malformed angle: \"" + text + "\"");
      return Angle::turns(num, 1);
    }
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw input_error("malformed angle: \"" + text + "\"");
    return Angle::decimal(v);
  } catch (const std::invalid_argument&) {
    throw input_error("malformed angle: \"" + text + "\"");
  } catch (const std::out_of_range&) {
    throw input_error("angle out of range: \"" + text + "\"");
  }
}

const Turns& Angle::rational() const {
  if (!exact_) throw std::logic_error("angle is not an exact rational");
  return t_;
}

Angle Angle::conj() const {
  if (exact_) return Angle(-t_);
  if (d_ == 0.0) return *this;
  return Angle::decimal(1.0 - d_);
}

std::string Angle::str() const {
  if (exact_) return t_.str();
  std::ostringstream os;
  os.precision(17);
  os << d_;
  return os.str();
}

std::complex<double> unit_circle(const Angle& a) {
  if (a.exact()) {
    const Turns& t = a.rational();
    if (t.den() == 1) return {1.0, 0.0};
    if (t.den() == 2) return {-1.0, 0.0};
    if (t.den() == 4) return t.num() == 1 ? std::complex<double>{0.0, 1.0}
                                          : std::complex<double>{0.0, -1.0};
    long double phi = 2.0L * std::numbers::pi_v<long double> *
                      static_cast<long double>(t.num()) / static_cast<long double>(t.den());
    return {static_cast<double>(std::cos(phi)),
            static_cast<double>(std::sin(phi))};
  }
  long double phi = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(a.value());
  return {static_cast<double>(std::cos(phi)), static_cast<double>(std::sin(phi))};
}

bool TorusPoint::in_star() const {
  for (const Angle& a : coords) {
    if (a.is_zero()) return false;
  }
  return true;
}

bool TorusPoint::all_exact() const {
  for (const Angle& a : coords) {
    if (!a.exact()) return false;
  }
  return true;
}

std::string TorusPoint::str() const {
  std::string s = "(";
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ", ";
    s += coords[i].str();
  }
  s += ")";
  return s;
}

HermitianForm cf_matrix(const ColoredSeifertData& d, const TorusPoint& w) {
  require_valid(d);
  if (w.dim() != d.colors) {
    std::ostringstream os;
    os << "evaluation point has " << w.dim() << " coordinates but the data has " << d.colors
       << " colors";
    throw input_error(os.str());
  }
  const int n = d.colors;
  // Per coordinate: factor (1 - conj(w_i)) for sign +, (1 - w_i) for sign -.
  std::vector<std::complex<double>> plus(static_cast<size_t>(n)), minus(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::complex<double> wi = unit_circle(w.coords[static_cast<size_t>(i)]);
    plus[static_cast<size_t>(i)] = 1.0 - std::conj(wi);
    minus[static_cast<size_t>(i)] = 1.0 - wi;
  }
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d.dim, d.dim);
  // Sum over the half of the sign vectors with last coordinate '+' (bit n-1
  // clear); the opposite half is added as the conjugate transpose, which
  // makes the assembled matrix exactly Hermitian in floating point.
  const unsigned count = 1u << n;
  const unsigned half_bit = 1u << (n - 1);
  for (unsigned mask = 0; mask < count; ++mask) {
    if (mask & half_bit) continue;
    std::complex<double> coef = 1.0;
    for (int i = 0; i < n; ++i) {
      coef *= (mask & (1u << i)) ? minus[static_cast<size_t>(i)] : plus[static_cast<size_t>(i)];
    }
    p += coef * d.matrices[mask].cast<std::complex<double>>();
  }
  Eigen::MatrixXcd h = p + p.adjoint().eval();
  return HermitianForm(std::move(h));
}

SigResult cf_signature(const ColoredSeifertData& d, const TorusPoint& w, double zero_threshold) {
  HermitianForm h = cf_matrix(d, w);
  InertiaResult in = inertia(h, zero_threshold);
  SigResult r;
  r.signature = in.signature;
  r.nullity = in.nullity;
  r.degenerate_input = !w.in_star();
  return r;
}

TorusPoint z_map(const TorusPoint& w) {
  const int n = w.dim();
  TorusPoint z;
  z.coords.resize(static_cast<size_t>(2 * n));
  const Turns quarter(1, 4), half(1, 2), three_quarters(3, 4);
  for (int i = 0; i < n; ++i) {
    const Angle& a = w.coords[static_cast<size_t>(i)];
    if (a.exact()) {
      const Turns& t = a.rational();
      if (t == quarter) {
        z.coords[static_cast<size_t>(i)] = Angle::turns(three_quarters);
        z.coords[static_cast<size_t>(n + i)] = Angle::turns(half);
      } else {
        z.coords[static_cast<size_t>(i)] = Angle::turns(t + three_quarters);
        z.coords[static_cast<size_t>(n + i)] = Angle::turns(quarter);
      }
      continue;
    }
    double t = a.value();
    if (t == 0.25) {
      z.coords[static_cast<size_t>(i)] = Angle::turns(three_quarters);
      z.coords[static_cast<size_t>(n + i)] = Angle::turns(half);
      continue;
    }
    // t + 3/4 mod 1, computed as an exact subtraction when t >= 1/4 so the
    // result can only be 0 when t == 1/4 (handled above). For t < 1/4 the
    // sum may round up to 1.0; nudge back inside [0,1) to preserve the
    // no-coordinate-at-angle-0 guarantee.
    double zi = t >= 0.25 ? t - 0.25 : t + 0.75;
    if (zi >= 1.0) zi = std::nextafter(1.0, 0.0);
    z.coords[static_cast<size_t>(i)] = Angle::decimal(zi);
    z.coords[static_cast<size_t>(n + i)] = Angle::turns(quarter);
  }
  return z;
}

SigResult sigma_hat(const ColoredSeifertData& d_pm, const TorusPoint& w, double zero_threshold) {
  if (d_pm.colors != 2 * w.dim()) {
    std::ostringstream os;
    os << "doubled-link data must have exactly 2*" << w.dim() << " colors, has " << d_pm.colors;
    throw input_error(os.str());
  }
  SigResult r = cf_signature(d_pm, z_map(w), zero_threshold);
  // z_map lands in the open stratum by construction.
  r.degenerate_input = false;
  return r;
}

}  // namespace clsig
