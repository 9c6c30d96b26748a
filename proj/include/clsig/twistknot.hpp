#pragma once

#include "clsig/exact.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace clsig {

// Algebraic concordance order of the n-twist knot, decided by the arithmetic
// of 4n+1: negative n have infinite order; square 4n+1 is algebraically
// slice; a prime = 3 (mod 4) dividing 4n+1 to odd multiplicity gives order 4;
// everything else has order 2.
enum class TwistClass { InfiniteOrder, AlgebraicallySlice, Order4, Order2 };

struct TwistClassification {
  long long n = 0;
  TwistClass cls = TwistClass::Order2;
  BigInt m = 1;                                        // 4n+1 (for n >= 0)
  std::vector<std::pair<BigInt, int>> factorization;   // of 4n+1, ascending primes
};

std::string class_name(TwistClass c);
// "p^e·q·..." with an ASCII fallback-free UTF-8 separator; "1" for m = 1.
std::string factorization_str(const TwistClassification& c);

TwistClassification classify(long long n);

// A solution of n = a^2 - a + b^2 with a, b >= 1; equivalently a splitting
// 4n+1 = (2a-1)^2 + (2b)^2.
struct Decomposition {
  long long a = 0;
  long long b = 0;
};

// All decompositions of n, ascending in a.
std::vector<Decomposition> decompositions(long long n);

// f(a,b) = 2a^2 + 2b^2 - 8a - 19b + 7; a positive value obstructs.
long long f_value(long long a, long long b);

// The inequality-chain ledger for one decomposition: the closed-form
// signature average of the model link, the local-move budget, and the
// resulting lower bound with its integer multiple f.
struct BoundReport {
  long long a = 0, b = 0;
  BigRat r_l3;               // 2*(a+1)(a-2)/3 + 2*(b-1)^2/3
  long long bands = 0;       // 2b - 1
  long long crossings = 0;   // b
  long long vmoves = 0;      // (a+b-1) + (a+b-2)
  long long budget = 0;      // 5b + 2a - 4
  BigRat lower_bound;        // r_l3 - budget == (2a^2+2b^2-8a-19b+10)/3
  long long f = 0;           // 3*lower_bound - 3 == f_value(a,b)
};

BoundReport bound_chain(long long a, long long b);

struct ObstructionWitness {
  std::optional<Decomposition> decomposition;  // with f_value > 0
  long long f = 0;
  std::optional<long long> x;  // n = x^2 + x + 1 with x > 1
};

// Whether the order-2 obstruction machinery rules n out: some decomposition
// has f > 0, or n = x^2+x+1 with x > 1. When strict_geometry is set only
// decompositions with a >= b participate.
std::pair<bool, ObstructionWitness> has_obstruction(long long n, bool strict_geometry = false);

struct ExceptionAudit {
  long long n = 0;
  TwistClassification classification;
  // Every decomposition with its f value ((a >= b)-filtered in strict mode).
  std::vector<std::pair<Decomposition, long long>> decomposition_f;
  std::optional<long long> x_witness;
  bool obstructed = false;
  std::optional<Decomposition> f_witness;
  bool tamulis_removed = false;  // set by tamulis_filter
};

struct ExceptionsReport {
  long long nmax = 0;
  bool strict_geometry = false;
  std::vector<ExceptionAudit> audits;       // every Order2 n <= nmax, ascending
  std::vector<long long> candidates;        // n with verdict candidate-exception
  std::vector<long long> filtered;          // candidates surviving tamulis_filter
  // In default mode, every candidate satisfies n <= this bound (the maximum
  // of a^2-a+b^2 over the region f <= 0), so the search is complete beyond
  // nmax >= bound. No finite analogue exists in strict mode (a value absent).
  std::optional<long long> self_consistency_bound;
};

// Audits every Order2 n in [1, nmax]: decomposition scan, f values, the
// x^2+x+1 test, verdicts, the Tamulis filter, and the self-consistency bound.
ExceptionsReport exceptions(long long nmax, bool strict_geometry = false);

// Removes candidate exceptions with 4n+1 prime — except n = 1, which stays.
// Marks tamulis_removed on the inputs it drops; returns the survivors.
std::vector<ExceptionAudit> tamulis_filter(std::vector<ExceptionAudit>& audits);

// Exact check that the candidate derivative vectors v1 = (1,a,0,b) and
// v2 = (0,b,1,1-a) are isotropic for the block form twist_sum_matrix(n),
// n = a^2-a+b^2: v_i^T V v_j = 0 for all i,j.
bool derivative_check(long long a, long long b);

// Exact check that m1, m2, v1, v2 stay linearly independent over Q in the
// rank-2 module over Q[t]/(p(t)), p(t) = n t^2 - (2n+1) t + n, written in the
// Q-basis {m1, t m1, m2, t m2}. Raises input_error when p(t) is reducible
// (4n+1 a perfect square).
bool alexander_independence(long long a, long long b);

// Published reference lists, stored only for the --paper-diff comparison —
// never consulted by the computation above.
extern const std::array<long long, 39> kReferenceCandidates;
extern const std::array<long long, 12> kReferenceFiltered;

struct FixtureDiff {
  std::vector<long long> missing;  // in the fixture, not computed
  std::vector<long long> extra;    // computed, not in the fixture
};

FixtureDiff diff_lists(const std::vector<long long>& computed,
                       const long long* fixture, size_t fixture_len);

}  // namespace clsig
