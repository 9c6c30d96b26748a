#pragma once

#include "clsig/exact.hpp"
#include "clsig/signature.hpp"

#include <string>
#include <vector>

namespace clsig {

// Finitely presented abelian group A = <g_1..g_n | r_1..r_l>. Relation j is
// the row relations[j]; its entry i is the coefficient of g_i. No relations
// means the free group Z^n.
struct AbelianPresentation {
  int generators = 1;
  std::vector<std::vector<BigInt>> relations;  // l rows of length `generators`
};

// Text forms: "Z^n" (or "Z") for free groups; otherwise "n=<k>" optionally
// followed by semicolon-separated "rel=c1,c2,..." rows, e.g. "n=2; rel=1,1".
AbelianPresentation parse_presentation(const std::string& text);

using BigMat = std::vector<std::vector<BigInt>>;  // row-major

// U (rows x rows) and V (cols x cols) unimodular, D = U*M*V diagonal with
// d_1 | d_2 | ... >= 0 (nonzero entries first). Exact arithmetic throughout.
struct SnfResult {
  BigMat u, d, v;
};

SnfResult smith_normal_form(const BigMat& m, int rows, int cols);

// The solution set of M*theta = 0 (mod Z^l) inside the n-torus:
// torsion_count disjoint copies of a rank-R torus,
//   omega(k, y) = theta^{(k)} + B*y  (angles mod 1),  y in [0,1)^R.
struct SubtorusParam {
  int ambient = 0;  // n
  int rank = 0;     // R
  std::vector<std::vector<Turns>> torsion_reps;  // each of length n; lexicographic order
  std::vector<std::vector<long long>> basis;     // n rows, R columns (integer matrix B)
  BigInt torsion_count = 1;                      // == torsion_reps.size()
};

// Derives the parametrization via Smith normal form. Torsion subgroups with
// more than 2^20 elements are rejected (the representatives are materialized).
SubtorusParam subtorus(const AbelianPresentation& p);

// The full torus Z^n (rank n, identity basis, single representative 0).
SubtorusParam full_torus(int n);

struct GridSample {
  TorusPoint point;
  // Some coordinate is pinned at angle 0 for every value of the free
  // parameters (zero basis row and zero torsion offset): jitter cannot move
  // it, the degenerate evaluation policy applies.
  bool structurally_degenerate = false;
  // A deterministic jitter was applied to clear a removable angle-0 hit.
  bool jittered = false;
};

// Midpoint sampling grid over a parametrized subtorus: for each torsion
// representative (outer, lexicographic) and each midpoint vector
// y in {(2j+1)/(2N)}^R (row-major, first free direction slowest), one sample
// of uniform weight 1/(torsion_count * N^R). When a midpoint lands a
// removable coordinate exactly at angle 0, a deterministic jitter of
// 1/(4*N*prime) turns is added to the offending free directions (first prime
// in {3,5,7,...} that clears them). Samples are addressable by global index,
// so the stream can be partitioned deterministically.
class SampleGrid {
 public:
  SampleGrid(const SubtorusParam& s, long long n_per_dim);

  long long total() const { return total_; }
  long long n_per_dim() const { return n_; }
  BigRat weight() const;  // exact uniform weight, sums to 1 over the grid
  GridSample at(long long index) const;

 private:
  SubtorusParam s_;  // held by value: the grid must outlive any temporary argument
  long long n_;
  long long points_per_rep_;
  long long total_;
};

}  // namespace clsig
