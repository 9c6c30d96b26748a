#pragma once

// Shared helpers for the unit and acceptance suites:
//   - exact integer-coefficient polynomial arithmetic, used to check
//     det(A - t*A^T) of generated Seifert matrices against the closed-form
//     torus-knot Alexander polynomial,
//   - exact integer determinants (Bareiss) for unimodularity checks,
//   - deterministic random generators for colored Seifert data, integer
//     matrices, and unimodular matrices,
//   - a brute-force character enumerator for finite abelian groups,
//   - a tiny subprocess runner for end-to-end CLI checks.
//
// Everything here throws std::runtime_error on internal contract violations
// so that a misuse inside a test shows up as a test failure, not UB.

#include "clsig/abelian.hpp"
#include "clsig/exact.hpp"
#include "clsig/seifert.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsup {

using clsig::BigInt;
using clsig::BigMat;

// --- Z[t] polynomials (coefficient of t^k at index k; empty = zero) ---------

using Poly = std::vector<BigInt>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  poly_trim(r);
  return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  poly_trim(r);
  return r;
}

inline Poly poly_neg(Poly p) {
  for (BigInt& c : p) c = -c;
  return p;
}

// Exact division: requires b | a in Z[t]; throws when the division is not
// exact (leading-coefficient division or a nonzero remainder).
inline Poly poly_divexact(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  if (b.empty()) throw std::runtime_error("poly_divexact: division by zero");
  if (a.empty()) return {};
  if (a.size() < b.size()) throw std::runtime_error("poly_divexact: inexact (degree)");
  Poly q(a.size() - b.size() + 1);
  while (!a.empty() && a.size() >= b.size()) {
    if (a.back() % b.back() != 0) {
      throw std::runtime_error("poly_divexact: inexact (leading coefficient)");
    }
    BigInt c = a.back() / b.back();
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    poly_trim(a);
  }
  if (!a.empty()) throw std::runtime_error("poly_divexact: nonzero remainder");
  return q;
}

// t^k - 1.
inline Poly t_pow_minus_one(int k) {
  Poly p(static_cast<size_t>(k) + 1);
  p[0] = -1;
  p[static_cast<size_t>(k)] = 1;
  return p;
}

// Alexander polynomial of the (p,q) torus knot for coprime p, q >= 1:
// (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)). Exact polynomial division.
inline Poly torus_knot_alexander(int p, int q) {
  Poly num = poly_mul(t_pow_minus_one(p * q), t_pow_minus_one(1));
  return poly_divexact(poly_divexact(num, t_pow_minus_one(p)), t_pow_minus_one(q));
}

// Strip the t^k factor and normalize the lowest coefficient to be positive,
// so polynomials can be compared "up to +-t^k".
inline Poly alex_normalize(Poly p) {
  poly_trim(p);
  if (p.empty()) return p;
  size_t low = 0;
  while (p[low] == 0) ++low;
  p.erase(p.begin(), p.begin() + static_cast<long>(low));
  if (p[0] < 0) p = poly_neg(p);
  return p;
}

// Fraction-free (Bareiss) determinant of a matrix of polynomials. All the
// interior divisions are exact in Z[t].
inline Poly poly_det(std::vector<std::vector<Poly>> m) {
  size_t n = m.size();
  if (n == 0) return Poly{BigInt(1)};
  for (const auto& row : m) {
    if (row.size() != n) throw std::runtime_error("poly_det: not square");
  }
  int sign = 1;
  Poly prev{BigInt(1)};
  for (size_t k = 0; k + 1 < n; ++k) {
    size_t pivot = k;
    while (pivot < n && m[pivot][k].empty()) ++pivot;
    if (pivot == n) return {};  // singular
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = poly_divexact(
            poly_sub(poly_mul(m[i][j], m[k][k]), poly_mul(m[i][k], m[k][j])), prev);
      }
      m[i][k].clear();
    }
    prev = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  return sign < 0 ? poly_neg(det) : det;
}

// det(A - t*A^T) as an exact polynomial.
inline Poly seifert_alexander(const clsig::IntMat& a) {
  size_t n = static_cast<size_t>(a.rows());
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Poly e{BigInt(a(static_cast<long>(i), static_cast<long>(j))),
             BigInt(-a(static_cast<long>(j), static_cast<long>(i)))};
      poly_trim(e);
      m[i][j] = std::move(e);
    }
  }
  return poly_det(std::move(m));
}

// --- exact integer linear algebra -------------------------------------------

// Bareiss determinant over the integers.
inline BigInt int_det(BigMat m) {
  size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m) {
    if (row.size() != n) throw std::runtime_error("int_det: not square");
  }
  int sign = 1;
  BigInt prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        BigInt num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        if (num % prev != 0) throw std::runtime_error("int_det: inexact division");
        m[i][j] = num / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

inline BigMat mat_mul(const BigMat& a, const BigMat& b) {
  size_t r = a.size();
  size_t inner = r ? a[0].size() : 0;
  if (inner != b.size()) throw std::runtime_error("mat_mul: dimension mismatch");
  size_t c = b.empty() ? 0 : b[0].size();
  BigMat out(r, std::vector<BigInt>(c));
  for (size_t i = 0; i < r; ++i) {
    for (size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline BigMat identity_mat(size_t n) {
  BigMat m(n, std::vector<BigInt>(n));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// --- deterministic random generators -----------------------------------------

inline long long rand_in(std::mt19937_64& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

// Random colored Seifert data satisfying the transpose symmetry exactly:
// masks with the top color bit clear are filled freely, opposite masks are
// their transposes.
inline clsig::ColoredSeifertData random_colored(std::mt19937_64& rng, int colors, int dim,
                                                long long bound = 3) {
  clsig::ColoredSeifertData d;
  d.colors = colors;
  d.dim = dim;
  d.label = "random";
  unsigned count = 1u << colors;
  unsigned full = count - 1;
  d.matrices.assign(count, clsig::IntMat());
  for (unsigned mask = 0; mask < count; ++mask) {
    if (mask & (1u << (colors - 1))) continue;
    clsig::IntMat a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = rand_in(rng, -bound, bound);
    }
    d.matrices[mask] = a;
    d.matrices[full ^ mask] = a.transpose();
  }
  return d;
}

inline BigMat random_bigmat(std::mt19937_64& rng, int rows, int cols, long long bound) {
  BigMat m(static_cast<size_t>(rows), std::vector<BigInt>(static_cast<size_t>(cols)));
  for (auto& row : m) {
    for (auto& e : row) e = rand_in(rng, -bound, bound);
  }
  return m;
}

// Product of random elementary row operations: determinant is exactly +-1.
inline BigMat random_unimodular(std::mt19937_64& rng, int n, int ops = -1) {
  if (ops < 0) ops = 3 * n + 2;
  BigMat u = identity_mat(static_cast<size_t>(n));
  if (n < 2) return u;
  for (int s = 0; s < ops; ++s) {
    long long kind = rand_in(rng, 0, 9);
    size_t i = static_cast<size_t>(rand_in(rng, 0, n - 1));
    size_t j = static_cast<size_t>(rand_in(rng, 0, n - 2));
    if (j >= i) ++j;
    if (kind < 7) {
      long long c = rand_in(rng, 1, 2) * (rand_in(rng, 0, 1) ? 1 : -1);
      for (int k = 0; k < n; ++k) u[i][static_cast<size_t>(k)] += c * u[j][static_cast<size_t>(k)];
    } else if (kind < 9) {
      std::swap(u[i], u[j]);
    } else {
      for (auto& e : u[i]) e = -e;
    }
  }
  return u;
}

// --- brute-force characters ---------------------------------------------------

// Exact lexicographic order on angle vectors (by value, via cross
// multiplication on the reduced fractions).
inline bool turns_less(const clsig::Turns& a, const clsig::Turns& b) {
  return static_cast<__int128>(a.num()) * b.den() < static_cast<__int128>(b.num()) * a.den();
}

inline bool turns_vec_less(const std::vector<clsig::Turns>& a,
                           const std::vector<clsig::Turns>& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] == b[i]) continue;
    return turns_less(a[i], b[i]);
  }
  return a.size() < b.size();
}

// All theta in (Q/Z)^n with every coordinate a multiple of 1/denom that
// satisfy each relation row modulo 1, sorted. For a finite group A whose
// exponent divides denom this is exactly the character set of A.
inline std::vector<std::vector<clsig::Turns>> brute_force_characters(
    const clsig::AbelianPresentation& p, long long denom) {
  int n = p.generators;
  std::vector<std::vector<long long>> rel;
  for (const auto& row : p.relations) {
    std::vector<long long> r;
    for (const BigInt& c : row) {
      BigInt reduced = ((c % denom) + denom) % denom;
      r.push_back(reduced.convert_to<long long>());
    }
    rel.push_back(std::move(r));
  }
  std::vector<std::vector<clsig::Turns>> found;
  std::vector<long long> k(static_cast<size_t>(n), 0);
  while (true) {
    bool ok = true;
    for (const auto& r : rel) {
      __int128 s = 0;
      for (int i = 0; i < n; ++i) s += static_cast<__int128>(r[static_cast<size_t>(i)]) * k[static_cast<size_t>(i)];
      if (s % denom != 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<clsig::Turns> theta;
      theta.reserve(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) theta.emplace_back(k[static_cast<size_t>(i)], denom);
      found.push_back(std::move(theta));
    }
    int pos = n - 1;
    while (pos >= 0 && ++k[static_cast<size_t>(pos)] == denom) {
      k[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  std::sort(found.begin(), found.end(), turns_vec_less);
  return found;
}

// A 2n-color dataset with the pushoff layout of a doubled link (first the n
// "positive", then the n "negative" colors), built as the disjoint union
// L (+) mirror(L). Not the honest doubled link of L, but a valid input for
// the extended-signature path with exactly predictable values.
inline clsig::ColoredSeifertData mirror_pair(const clsig::ColoredSeifertData& d) {
  return clsig::split_union(d, clsig::mirror(d));
}

// --- filesystem / subprocess helpers ------------------------------------------

inline const std::string& scratch_dir() {
  static const std::string dir = [] {
    char templ[] = "/tmp/clsig-tests-XXXXXX";
    const char* p = ::mkdtemp(templ);
    if (p == nullptr) throw std::runtime_error("mkdtemp failed");
    return std::string(p);
  }();
  return dir;
}

inline std::string scratch_path(const std::string& name) {
  static std::atomic<int> counter{0};
  return scratch_dir() + "/" + std::to_string(counter.fetch_add(1)) + "-" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

inline bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

#ifdef CLSIG_CLI_PATH

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Run the CLI with the given argument string; capture exit code and streams.
inline CmdResult run_cli(const std::string& args) {
  std::string out_path = scratch_path("stdout.txt");
  std::string err_path = scratch_path("stderr.txt");
  std::string cmd =
      std::string(CLSIG_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  CmdResult r;
  if (rc == -1) {
    r.code = -1;
  } else if (WIFEXITED(rc)) {
    r.code = WEXITSTATUS(rc);
  } else if (WIFSIGNALED(rc)) {
    r.code = 128 + WTERMSIG(rc);
  }
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

#endif  // CLSIG_CLI_PATH

}  // namespace testsup
