#include "clsig/abelian.hpp"

#include "clsig/util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace clsig {

namespace {

BigMat identity(int n) {
  BigMat m(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return m;
}

// Left-multiply by elementary row operations, mirrored into u.
void swap_rows(BigMat& d, BigMat& u, int a, int b) {
  std::swap(d[static_cast<size_t>(a)], d[static_cast<size_t>(b)]);
  std::swap(u[static_cast<size_t>(a)], u[static_cast<size_t>(b)]);
}

void add_row(BigMat& d, BigMat& u, int dst, int src, const BigInt& factor) {
  for (size_t j = 0; j < d[static_cast<size_t>(dst)].size(); ++j) {
    d[static_cast<size_t>(dst)][j] += factor * d[static_cast<size_t>(src)][j];
  }
  for (size_t j = 0; j < u[static_cast<size_t>(dst)].size(); ++j) {
    u[static_cast<size_t>(dst)][j] += factor * u[static_cast<size_t>(src)][j];
  }
}

void negate_row(BigMat& d, BigMat& u, int r) {
  for (auto& x : d[static_cast<size_t>(r)]) x = -x;
  for (auto& x : u[static_cast<size_t>(r)]) x = -x;
}

void swap_cols(BigMat& d, BigMat& v, int a, int b) {
  for (auto& row : d) std::swap(row[static_cast<size_t>(a)], row[static_cast<size_t>(b)]);
  for (auto& row : v) std::swap(row[static_cast<size_t>(a)], row[static_cast<size_t>(b)]);
}

void add_col(BigMat& d, BigMat& v, int dst, int src, const BigInt& factor) {
  for (auto& row : d) row[static_cast<size_t>(dst)] += factor * row[static_cast<size_t>(src)];
  for (auto& row : v) row[static_cast<size_t>(dst)] += factor * row[static_cast<size_t>(src)];
}

}  // namespace

SnfResult smith_normal_form(const BigMat& m, int rows, int cols) {
  if (static_cast<int>(m.size()) != rows) throw input_error("matrix row count mismatch");
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != cols) throw input_error("matrix column count mismatch");
  }
  SnfResult r;
  r.d = m;
  r.u = identity(rows);
  r.v = identity(cols);
  BigMat& d = r.d;

  const int steps = std::min(rows, cols);
  for (int k = 0; k < steps; ++k) {
    // Find a nonzero pivot of minimal magnitude in the trailing submatrix.
    int pi = -1, pj = -1;
    BigInt best;
    for (int i = k; i < rows; ++i) {
      for (int j = k; j < cols; ++j) {
        const BigInt& x = d[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (x == 0) continue;
        BigInt ax = abs(x);
        if (pi < 0 || ax < best) {
          best = ax;
          pi = i;
          pj = j;
        }
      }
    }
    if (pi < 0) break;  // trailing submatrix is zero
    if (pi != k) swap_rows(d, r.u, k, pi);
    if (pj != k) swap_cols(d, r.v, k, pj);

    // Euclidean reduction until row k and column k are clear beyond (k,k).
    for (;;) {
      bool reduced_any = false;
      for (int i = k + 1; i < rows; ++i) {
        BigInt& x = d[static_cast<size_t>(i)][static_cast<size_t>(k)];
        if (x == 0) continue;
        BigInt q = x / d[static_cast<size_t>(k)][static_cast<size_t>(k)];
        add_row(d, r.u, i, k, -q);
        if (x != 0) {
          swap_rows(d, r.u, k, i);  // remainder became the smaller pivot
        }
        reduced_any = true;
      }
      for (int j = k + 1; j < cols; ++j) {
        BigInt& x = d[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (x == 0) continue;
        BigInt q = x / d[static_cast<size_t>(k)][static_cast<size_t>(k)];
        add_col(d, r.v, j, k, -q);
        if (x != 0) {
          swap_cols(d, r.v, k, j);
        }
        reduced_any = true;
      }
      if (!reduced_any) break;
    }

    // Enforce the divisibility chain: the pivot must divide everything in
    // the trailing submatrix; otherwise fold an offending row in and redo.
    bool redo = false;
    for (int i = k + 1; i < rows && !redo; ++i) {
      for (int j = k + 1; j < cols && !redo; ++j) {
        if (d[static_cast<size_t>(i)][static_cast<size_t>(j)] %
                d[static_cast<size_t>(k)][static_cast<size_t>(k)] !=
            0) {
          add_row(d, r.u, k, i, 1);
          redo = true;
        }
      }
    }
    if (redo) {
      --k;
      continue;
    }
    if (d[static_cast<size_t>(k)][static_cast<size_t>(k)] < 0) negate_row(d, r.u, k);
  }
  return r;
}

AbelianPresentation parse_presentation(const std::string& text) {
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string{};
    size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  std::string s = trim(text);
  if (s.empty()) throw input_error("empty group presentation");

  AbelianPresentation p;
  if (s == "Z" || s == "z") {
    p.generators = 1;
    return p;
  }
  if ((s[0] == 'Z' || s[0] == 'z') && s.size() > 1 && s[1] == '^') {
    std::string count = trim(s.substr(2));
    try {
      size_t used = 0;
      long long n = std::stoll(count, &used);
      if (used != count.size() || n < 1 || n > 16) {
        throw input_error("free rank must lie in [1, 16]: \"" + text + "\"");
      }
      p.generators = static_cast<int>(n);
      return p;
    } catch (const std::logic_error&) {
      throw input_error("malformed presentation: \"" + text + "\"");
    }
  }

  // "n=<k>; rel=a,b,...; rel=..." form.
  bool have_n = false;
  std::stringstream parts(s);
  std::string part;
  while (std::getline(parts, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    size_t eq = part.find('=');
    if (eq == std::string::npos) {
      throw input_error("malformed presentation clause \"" + part + "\" (expected key=value)");
    }
    std::string key = trim(part.substr(0, eq));
    std::string value = trim(part.substr(eq + 1));
    if (key == "n") {
      try {
        size_t used = 0;
        long long n = std::stoll(value, &used);
        if (used != value.size() || n < 1 || n > 16) {
          throw input_error("generator count must lie in [1, 16]: \"" + text + "\"");
        }
        p.generators = static_cast<int>(n);
        have_n = true;
      } catch (const std::logic_error&) {
        throw input_error("malformed generator count: \"" + value + "\"");
      }
    } else if (key == "rel") {
      std::vector<BigInt> row;
      std::stringstream cells(value);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        cell = trim(cell);
        try {
          size_t used = 0;
          long long c = std::stoll(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
          row.emplace_back(c);
        } catch (const std::logic_error&) {
          throw input_error("malformed relation coefficient \"" + cell + "\"");
        }
      }
      p.relations.push_back(std::move(row));
    } else {
      throw input_error("unknown presentation key \"" + key + "\"");
    }
  }
  if (!have_n) throw input_error("presentation must specify the generator count (n=...)");
  for (const auto& row : p.relations) {
    if (static_cast<int>(row.size()) != p.generators) {
      throw input_error("relation length does not match the generator count");
    }
  }
  return p;
}

namespace {

constexpr long long kMaxTorsionReps = 1ll << 20;

long long to_ll(const BigInt& x, const char* what) {
  if (x > BigInt(INT64_MAX) || x < BigInt(INT64_MIN)) {
    throw overflow_error(std::string("value too large for sampling in ") + what);
  }
  return static_cast<long long>(x);
}

}  // namespace

SubtorusParam subtorus(const AbelianPresentation& p) {
  if (p.generators < 1) throw input_error("presentation needs at least one generator");
  const int n = p.generators;
  const int l = static_cast<int>(p.relations.size());
  for (const auto& row : p.relations) {
    if (static_cast<int>(row.size()) != n) {
      throw input_error("relation length does not match the generator count");
    }
  }

  SnfResult snf = smith_normal_form(p.relations, l, n);

  SubtorusParam s;
  s.ambient = n;

  // phi_j is torsion (order d_j) when d_j >= 1; free when d_j = 0 or j is
  // beyond the diagonal. theta = V * phi mod 1.
  std::vector<long long> torsion_orders(static_cast<size_t>(n), 0);
  std::vector<int> free_indices;
  for (int j = 0; j < n; ++j) {
    BigInt dj = j < l ? snf.d[static_cast<size_t>(j)][static_cast<size_t>(j)] : BigInt(0);
    if (dj == 0) {
      free_indices.push_back(j);
    } else {
      torsion_orders[static_cast<size_t>(j)] = to_ll(dj, "torsion order");
    }
  }
  s.rank = static_cast<int>(free_indices.size());

  s.basis.assign(static_cast<size_t>(n), std::vector<long long>(free_indices.size(), 0));
  for (int i = 0; i < n; ++i) {
    for (size_t c = 0; c < free_indices.size(); ++c) {
      s.basis[static_cast<size_t>(i)][c] =
          to_ll(snf.v[static_cast<size_t>(i)][static_cast<size_t>(free_indices[c])],
                "free-direction basis");
    }
  }

  BigInt count = 1;
  for (int j = 0; j < n; ++j) {
    if (torsion_orders[static_cast<size_t>(j)] > 0) count *= torsion_orders[static_cast<size_t>(j)];
  }
  s.torsion_count = count;
  if (count > kMaxTorsionReps) {
    throw input_error("torsion subgroup too large to enumerate (more than 2^20 elements)");
  }

  // Enumerate torsion digit vectors lexicographically (first torsion index
  // slowest) and map each through V.
  std::vector<int> torsion_indices;
  for (int j = 0; j < n; ++j) {
    if (torsion_orders[static_cast<size_t>(j)] > 0) torsion_indices.push_back(j);
  }
  const long long reps = to_ll(count, "torsion count");
  s.torsion_reps.reserve(static_cast<size_t>(reps));
  std::vector<long long> digits(torsion_indices.size(), 0);
  for (long long k = 0; k < reps; ++k) {
    long long rem = k;
    for (size_t t = torsion_indices.size(); t-- > 0;) {
      long long order = torsion_orders[static_cast<size_t>(torsion_indices[t])];
      digits[t] = rem % order;
      rem /= order;
    }
    std::vector<Turns> theta(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      Turns acc;
      for (size_t t = 0; t < torsion_indices.size(); ++t) {
        int j = torsion_indices[t];
        long long vij =
            to_ll(snf.v[static_cast<size_t>(i)][static_cast<size_t>(j)], "torsion offset");
        acc = acc + Turns(digits[t], torsion_orders[static_cast<size_t>(j)]).times(vij);
      }
      theta[static_cast<size_t>(i)] = acc;
    }
    s.torsion_reps.push_back(std::move(theta));
  }
  return s;
}

SubtorusParam full_torus(int n) {
  if (n < 1) throw input_error("full torus needs at least one dimension");
  SubtorusParam s;
  s.ambient = n;
  s.rank = n;
  s.torsion_count = 1;
  s.torsion_reps.assign(1, std::vector<Turns>(static_cast<size_t>(n)));
  s.basis.assign(static_cast<size_t>(n), std::vector<long long>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) s.basis[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return s;
}

SampleGrid::SampleGrid(const SubtorusParam& s, long long n_per_dim) : s_(s), n_(n_per_dim) {
  if (n_ < 1) throw input_error("grid needs at least one point per free dimension");
  long long per_rep = 1;
  for (int r = 0; r < s_.rank; ++r) {
    if (per_rep > (1ll << 62) / n_) throw overflow_error("sampling grid too large");
    per_rep *= n_;
  }
  points_per_rep_ = per_rep;
  long long reps = static_cast<long long>(s_.torsion_reps.size());
  if (reps == 0) throw input_error("subtorus parametrization has no components");
  if (points_per_rep_ > (1ll << 62) / reps) throw overflow_error("sampling grid too large");
  total_ = points_per_rep_ * reps;
}

BigRat SampleGrid::weight() const { return BigRat(BigInt(1), BigInt(total_)); }

GridSample SampleGrid::at(long long index) const {
  if (index < 0 || index >= total_) throw std::out_of_range("sample index out of range");
  const long long rep = index / points_per_rep_;
  long long g = index % points_per_rep_;

  // Midpoint digits, first free direction slowest.
  std::vector<long long> digit(static_cast<size_t>(s_.rank), 0);
  for (size_t r = digit.size(); r-- > 0;) {
    digit[r] = g % n_;
    g /= n_;
  }

  const std::vector<Turns>& theta = s_.torsion_reps[static_cast<size_t>(rep)];
  const int n = s_.ambient;

  auto coords_for = [&](const std::vector<Turns>& y) {
    std::vector<Turns> c(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      Turns acc = theta[static_cast<size_t>(i)];
      for (int r = 0; r < s_.rank; ++r) {
        long long b = s_.basis[static_cast<size_t>(i)][static_cast<size_t>(r)];
        if (b != 0) acc = acc + y[static_cast<size_t>(r)].times(b);
      }
      c[static_cast<size_t>(i)] = acc;
    }
    return c;
  };

  std::vector<Turns> y(static_cast<size_t>(s_.rank));
  for (int r = 0; r < s_.rank; ++r) {
    y[static_cast<size_t>(r)] = Turns(2 * digit[static_cast<size_t>(r)] + 1, 2 * n_);
  }
  std::vector<Turns> coords = coords_for(y);

  GridSample out;
  out.structurally_degenerate = false;
  out.jittered = false;

  // Coordinates pinned at 0 independently of y cannot be repaired.
  std::vector<int> removable;
  for (int i = 0; i < n; ++i) {
    if (!coords[static_cast<size_t>(i)].is_zero()) continue;
    bool movable = false;
    for (int r = 0; r < s_.rank; ++r) {
      if (s_.basis[static_cast<size_t>(i)][static_cast<size_t>(r)] != 0) {
        movable = true;
        break;
      }
    }
    if (movable) {
      removable.push_back(i);
    } else {
      out.structurally_degenerate = true;
    }
  }

  if (!removable.empty() && !out.structurally_degenerate) {
    static constexpr long long kJitterPrimes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67};
    // The set of directions to nudge: the first nonzero basis direction of
    // each offending coordinate, deduplicated so shared directions move once.
    std::vector<int> directions;
    for (int i : removable) {
      for (int r = 0; r < s_.rank; ++r) {
        if (s_.basis[static_cast<size_t>(i)][static_cast<size_t>(r)] != 0) {
          if (std::find(directions.begin(), directions.end(), r) == directions.end()) {
            directions.push_back(r);
          }
          break;
        }
      }
    }
    bool fixed = false;
    for (long long prime : kJitterPrimes) {
      std::vector<Turns> yj = y;
      Turns delta(1, 4 * n_ * prime);
      for (int r : directions) {
        yj[static_cast<size_t>(r)] = yj[static_cast<size_t>(r)] + delta;
      }
      std::vector<Turns> cj = coords_for(yj);
      bool clean = true;
      for (const Turns& t : cj) {
        if (t.is_zero()) {
          clean = false;
          break;
        }
      }
      if (clean) {
        coords = std::move(cj);
        out.jittered = true;
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      throw std::runtime_error("jitter failed to clear a removable degenerate sample");
    }
  }

  out.point.coords.reserve(static_cast<size_t>(n));
  for (const Turns& t : coords) out.point.coords.push_back(Angle::turns(t));
  return out;
}

}  // namespace clsig
