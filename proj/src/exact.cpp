#include "clsig/exact.hpp"

#include "clsig/util.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>

namespace clsig {

namespace {

using Wide = __int128;

long long narrow(Wide v, const char* what) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
    throw overflow_error(std::string("exact angle arithmetic overflow in ") + what);
  }
  return static_cast<long long>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Turns::Turns(long long num, long long den) {
  if (den == 0) throw input_error("angle denominator must be nonzero");
  Wide n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  n %= d;
  if (n < 0) n += d;
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n, "construction");
  den_ = narrow(d, "construction");
}

double Turns::value() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

Turns Turns::operator+(const Turns& o) const {
  Wide d = Wide(den_) * o.den_;
  Wide n = Wide(num_) * o.den_ + Wide(o.num_) * den_;
  n %= d;
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Turns r;
  r.num_ = narrow(n, "addition");
  r.den_ = narrow(d, "addition");
  return r;
}

Turns Turns::operator-() const {
  Turns r;
  r.num_ = num_ == 0 ? 0 : den_ - num_;
  r.den_ = num_ == 0 ? 1 : den_;
  return r;
}

Turns Turns::operator-(const Turns& o) const { return *this + (-o); }

Turns Turns::times(long long k) const {
  Wide n = Wide(num_) * k;
  Wide d = den_;
  n %= d;
  if (n < 0) n += d;
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Turns r;
  r.num_ = narrow(n, "integer multiple");
  r.den_ = narrow(d, "integer multiple");
  return r;
}

std::string Turns::str() const {
  if (num_ == 0) return "0";
  std::ostringstream os;
  os << num_ << '/' << den_;
  return os.str();
}

BigRat to_bigrat(const Turns& t) { return BigRat(BigInt(t.num()), BigInt(t.den())); }

std::string bigrat_str(const BigRat& r) {
  std::ostringstream os;
  if (r.denominator() == 1) {
    os << r.numerator();
  } else {
    os << r.numerator() << '/' << r.denominator();
  }
  return os.str();
}

}  // namespace clsig
