#include "clsig/twistknot.hpp"

#include "clsig/seifert.hpp"
#include "clsig/integrate.hpp"
#include "clsig/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace clsig {

namespace {

std::vector<std::pair<BigInt, int>> trial_factor(BigInt m) {
  std::vector<std::pair<BigInt, int>> factors;
  if (m <= 1) return factors;
  for (BigInt p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    factors.emplace_back(p, e);
  }
  if (m > 1) factors.emplace_back(m, 1);
  return factors;
}

bool is_perfect_square(const BigInt& m) {
  if (m < 0) return false;
  BigInt r = sqrt(m);
  return r * r == m;
}

long long isqrt_ll(long long v) {
  if (v < 0) return -1;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

std::string class_name(TwistClass c) {
  switch (c) {
    case TwistClass::InfiniteOrder: return "InfiniteOrder";
    case TwistClass::AlgebraicallySlice: return "AlgebraicallySlice";
    case TwistClass::Order4: return "Order4";
    case TwistClass::Order2: return "Order2";
  }
  return "?";
}

std::string factorization_str(const TwistClassification& c) {
  if (c.factorization.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < c.factorization.size(); ++i) {
    if (i) os << "·";  // middle dot
    os << c.factorization[i].first;
    if (c.factorization[i].second > 1) os << '^' << c.factorization[i].second;
  }
  return os.str();
}

TwistClassification classify(long long n) {
  TwistClassification r;
  r.n = n;
  if (n < 0) {
    r.cls = TwistClass::InfiniteOrder;
    r.m = BigInt(4) * n + 1;
    return r;
  }
  r.m = BigInt(4) * n + 1;
  r.factorization = trial_factor(r.m);
  if (is_perfect_square(r.m)) {
    r.cls = TwistClass::AlgebraicallySlice;
    return r;
  }
  for (const auto& [p, e] : r.factorization) {
    if (p % 4 == 3 && e % 2 == 1) {
      r.cls = TwistClass::Order4;
      return r;
    }
  }
  r.cls = TwistClass::Order2;
  return r;
}

std::vector<Decomposition> decompositions(long long n) {
  std::vector<Decomposition> out;
  if (n < 1) return out;
  for (long long a = 1; a * a - a < n; ++a) {
    long long b2 = n - a * a + a;
    long long b = isqrt_ll(b2);
    if (b >= 1 && b * b == b2) out.push_back({a, b});
  }
  return out;
}

long long f_value(long long a, long long b) {
  return 2 * a * a + 2 * b * b - 8 * a - 19 * b + 7;
}

BoundReport bound_chain(long long a, long long b) {
  if (a < 1 || b < 1) throw input_error("bound chain requires a, b >= 1");
  BoundReport r;
  r.a = a;
  r.b = b;
  // (a+1)(a-2)/3 evaluated as a formula for every a >= 1 (the chain uses the
  // closed form itself, also at a = 1 where the helper's domain starts at 2).
  BigRat knot_term(BigInt(a + 1) * BigInt(a - 2), BigInt(3));
  r.r_l3 = BigRat(BigInt(2)) * knot_term + BigRat(BigInt(2)) * torus_R_bb(b);
  r.bands = 2 * b - 1;
  r.crossings = b;
  r.vmoves = (a + b - 1) + (a + b - 2);
  r.budget = r.bands + r.crossings + r.vmoves;
  r.lower_bound = r.r_l3 - BigRat(BigInt(r.budget));
  BigRat f3 = BigRat(BigInt(3)) * r.lower_bound - BigRat(BigInt(3));
  if (f3.denominator() != 1 || f3.numerator() > BigInt(INT64_MAX) ||
      f3.numerator() < BigInt(INT64_MIN)) {
    throw overflow_error("bound chain f value out of range");
  }
  r.f = static_cast<long long>(f3.numerator());
  return r;
}

namespace {

// The x with n = x^2 + x + 1 and x > 1, when n has that form.
std::optional<long long> x_form_witness(long long n) {
  long long disc = 4 * n - 3;
  long long r = isqrt_ll(disc);
  if (r >= 0 && r * r == disc && (r - 1) % 2 == 0) {
    long long x = (r - 1) / 2;
    if (x > 1 && x * x + x + 1 == n) return x;
  }
  return std::nullopt;
}

}  // namespace

std::pair<bool, ObstructionWitness> has_obstruction(long long n, bool strict_geometry) {
  ObstructionWitness w;
  for (const Decomposition& dec : decompositions(n)) {
    if (strict_geometry && dec.a < dec.b) continue;
    long long f = f_value(dec.a, dec.b);
    if (f > 0) {
      w.decomposition = dec;
      w.f = f;
      return {true, w};
    }
  }
  if (std::optional<long long> x = x_form_witness(n)) {
    w.x = x;
    return {true, w};
  }
  return {false, w};
}

ExceptionsReport exceptions(long long nmax, bool strict_geometry) {
  if (nmax < 1) throw input_error("exceptions search requires nmax >= 1");
  ExceptionsReport rep;
  rep.nmax = nmax;
  rep.strict_geometry = strict_geometry;

  for (long long n = 1; n <= nmax; ++n) {
    TwistClassification cls = classify(n);
    if (cls.cls != TwistClass::Order2) continue;
    ExceptionAudit audit;
    audit.n = n;
    audit.classification = cls;
    for (const Decomposition& dec : decompositions(n)) {
      if (strict_geometry && dec.a < dec.b) continue;
      audit.decomposition_f.emplace_back(dec, f_value(dec.a, dec.b));
    }
    auto [obstructed, witness] = has_obstruction(n, strict_geometry);
    audit.obstructed = obstructed;
    audit.f_witness = witness.decomposition;
    // The audit records the x^2+x+1 form whenever n has it, even when an
    // f witness already settled the verdict.
    audit.x_witness = x_form_witness(n);
    rep.audits.push_back(std::move(audit));
  }

  for (const ExceptionAudit& a : rep.audits) {
    if (!a.obstructed) rep.candidates.push_back(a.n);
  }
  rep.filtered.clear();
  {
    std::vector<ExceptionAudit> survivors = tamulis_filter(rep.audits);
    for (const ExceptionAudit& a : survivors) {
      if (!a.obstructed) rep.filtered.push_back(a.n);
    }
  }

  if (!strict_geometry) {
    // Any candidate's decompositions all satisfy f <= 0, so the candidate
    // itself is bounded by the largest a^2-a+b^2 over that (bounded) region.
    long long bound = 0;
    for (long long a = 1; a <= 64; ++a) {
      for (long long b = 1; b <= 64; ++b) {
        if (f_value(a, b) <= 0) bound = std::max(bound, a * a - a + b * b);
      }
    }
    rep.self_consistency_bound = bound;
  }
  return rep;
}

std::vector<ExceptionAudit> tamulis_filter(std::vector<ExceptionAudit>& audits) {
  std::vector<ExceptionAudit> out;
  for (ExceptionAudit& a : audits) {
    bool prime = a.classification.factorization.size() == 1 &&
                 a.classification.factorization[0].second == 1;
    // Only candidate exceptions are subject to removal; n = 1 stays in.
    if (prime && !a.obstructed && a.n != 1) {
      a.tamulis_removed = true;
      continue;
    }
    a.tamulis_removed = false;
    out.push_back(a);
  }
  return out;
}

bool derivative_check(long long a, long long b) {
  if (a < 1 || b < 1) throw input_error("derivative check requires a, b >= 1");
  const BigInt n = BigInt(a) * a - a + BigInt(b) * b;
  if (n > BigInt(INT64_MAX)) throw overflow_error("derivative check parameters too large");
  IntMat v_mat = twist_sum_matrix(n.convert_to<long long>());
  const BigInt v1[4] = {1, BigInt(a), 0, BigInt(b)};
  const BigInt v2[4] = {0, BigInt(b), 1, BigInt(1) - a};
  const BigInt* vecs[2] = {v1, v2};
  for (const BigInt* x : vecs) {
    for (const BigInt* y : vecs) {
      BigInt acc = 0;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) acc += x[i] * BigInt(v_mat(i, j)) * y[j];
      }
      if (acc != 0) return false;
    }
  }
  return true;
}

bool alexander_independence(long long a, long long b) {
  if (a < 1 || b < 1) throw input_error("independence check requires a, b >= 1");
  const BigInt n = BigInt(a) * a - a + BigInt(b) * b;
  if (is_perfect_square(BigInt(4) * n + 1)) {
    throw input_error("reducible module polynomial: 4n+1 is a perfect square");
  }
  // Rows are m1, m2, v1, v2 in the basis {m1, t m1, m2, t m2}, using
  //   v1 = (n + a(1-n+nt)) m1 + b(1-n+nt) m2,
  //   v2 = b(1-n+nt) m1 + (1 + (1-a)(1-n+nt)) m2.
  const BigInt one_minus_n = BigInt(1) - n;
  BigInt rows[4][4] = {
      {1, 0, 0, 0},
      {0, 0, 1, 0},
      {n + a * one_minus_n, BigInt(a) * n, BigInt(b) * one_minus_n, BigInt(b) * n},
      {BigInt(b) * one_minus_n, BigInt(b) * n, BigInt(1) + (BigInt(1) - a) * one_minus_n,
       (BigInt(1) - a) * n},
  };
  // Full 4x4 determinant as an exact permutation sum (24 terms), so the
  // check does not lean on any structural shortcut.
  BigInt det = 0;
  int perm[4] = {0, 1, 2, 3};
  std::sort(perm, perm + 4);
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (perm[i] > perm[j]) ++inversions;
      }
    }
    BigInt term = (inversions % 2 == 0) ? 1 : -1;
    for (int i = 0; i < 4; ++i) term *= rows[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm, perm + 4));
  return det != 0;
}

const std::array<long long, 39> kReferenceCandidates = {
    1,  3,  4,  9,  10, 11, 15, 16, 18, 22, 24, 25, 27,  28, 29, 34, 36, 37, 38, 39,
    45, 48, 49, 51, 55, 58, 61, 64, 66, 67, 69, 70, 78, 79, 83, 84, 87, 93, 101};

const std::array<long long, 12> kReferenceFiltered = {1,  11, 16, 29, 36, 38,
                                                      51, 55, 61, 66, 83, 101};

FixtureDiff diff_lists(const std::vector<long long>& computed, const long long* fixture,
                       size_t fixture_len) {
  FixtureDiff d;
  std::set<long long> comp(computed.begin(), computed.end());
  std::set<long long> fix(fixture, fixture + fixture_len);
  for (long long n : fix) {
    if (!comp.count(n)) d.missing.push_back(n);
  }
  for (long long n : comp) {
    if (!fix.count(n)) d.extra.push_back(n);
  }
  return d;
}

}  // namespace clsig
