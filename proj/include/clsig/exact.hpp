#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace clsig {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::rational<BigInt>;

// An exact angle measured in turns, reduced modulo 1: num/den with
// 0 <= num < den, gcd(num, den) = 1, den >= 1. Intermediates go through
// 128-bit integers; results that do not fit in 64 bits raise overflow_error
// rather than silently wrapping.
class Turns {
 public:
  Turns() : num_(0), den_(1) {}
  // num/den turns, any integers, den != 0; normalized into [0, 1).
  Turns(long long num, long long den);

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  double value() const;  // in [0, 1)

  Turns operator+(const Turns& o) const;
  Turns operator-(const Turns& o) const;
  Turns operator-() const;              // 1 - t mod 1 (complex conjugation)
  Turns times(long long k) const;       // k * t mod 1

  friend bool operator==(const Turns&, const Turns&) = default;

  std::string str() const;  // "num/den", or "0" when zero

 private:
  long long num_;
  long long den_;
};

// Exact rational value of a Turns angle (num/den as BigRat, not reduced mod 1
// beyond the class invariant).
BigRat to_bigrat(const Turns& t);

std::string bigrat_str(const BigRat& r);

}  // namespace clsig
