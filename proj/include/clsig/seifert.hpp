#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace clsig {

using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// A braid word on `strands` strands. Each letter is a signed generator index:
// +i stands for sigma_i, -i for its inverse, with 1 <= i <= strands-1.
struct BraidWord {
  int strands = 1;
  std::vector<int> letters;
};

// Throws input_error when a letter is zero or out of range, or strands < 1.
void validate(const BraidWord& w);

// Generalized Seifert data for a colored link: one m x m integer matrix per
// sign vector in {+1,-1}^colors. Sign vectors are encoded as bitmasks where
// bit i SET means the i-th sign is '-'; the string form writes coordinate i
// as character i ('+' or '-'). Transpose symmetry ties opposite masks:
// matrices[~mask] == matrices[mask]^T.
struct ColoredSeifertData {
  int colors = 1;
  int dim = 0;
  std::string label;
  std::vector<IntMat> matrices;  // size 2^colors, indexed by sign mask

  const IntMat& at(unsigned mask) const { return matrices.at(mask); }
};

std::string sign_key(unsigned mask, int colors);
unsigned mask_of_key(const std::string& key);  // throws input_error on bad chars

// Structural checks: colors in [1,16], 2^colors matrices, all dim x dim,
// exact transpose symmetry. Returns human-readable violations; empty = ok.
std::vector<std::string> validate(const ColoredSeifertData& d);

// validate() and throw input_error listing every violation.
void require_valid(const ColoredSeifertData& d);

// Seifert matrix of the closure of a braid word, from Seifert's algorithm on
// the closed-braid diagram (one disk per strand, one band per letter). Basis
// loops run through consecutive occurrences of the same generator; rows are
// ordered by generator index, then by position of the first occurrence.
// Requires every generator index to occur at least once (otherwise the
// closure's Seifert surface is disconnected and input_error is raised).
// The resulting matrix has dim = letters - strands + 1 and satisfies
// det(A - t*A^T) = Alexander polynomial of the closure up to +-t^k.
ColoredSeifertData braid_seifert(const BraidWord& w, const std::string& label = "");

// One-color data for the (p,q) torus link: for q >= 0 the braid closure of
// (sigma_1 ... sigma_{p-1})^q on p strands; for q < 0 the mirror image of
// (p,-q). p must be >= 1. p >= 2 with q = 0 is rejected (disconnected).
ColoredSeifertData torus_link_data(int p, int q);

// The 2x2 matrix [[n,1],[0,-1]] (genus-1 twist-knot Seifert form).
ColoredSeifertData twist_knot_data(long long n);

// Block sum of two twist-knot forms: [[n,1],[0,-1]] ^ (+) [[n,1],[0,-1]].
IntMat twist_sum_matrix(long long n);

// Disjoint union with disjoint color sets: colors add, matrices are block
// diagonal per combined sign vector.
ColoredSeifertData split_union(const ColoredSeifertData& d1, const ColoredSeifertData& d2);

// Mirror image: every matrix maps A^eps -> -(A^eps)^T. Negates the signature
// function at every evaluation point.
ColoredSeifertData mirror(const ColoredSeifertData& d);

// --- File format -----------------------------------------------------------
// Canonical JSON document:
//   { "colors": n, "dim": m, "label": "...",
//     "matrices": { "<signs>": [[ints]], ... } }
// with all 2^n sign-string keys present. Writing is canonical (fixed key
// order, sorted sign keys, 2-space indent, LF, trailing newline) and atomic.

ColoredSeifertData parse_seifert_json(const std::string& text, const std::string& origin);
ColoredSeifertData load_seifert_file(const std::string& path);
std::string to_canonical_json(const ColoredSeifertData& d);
void save_seifert_file(const ColoredSeifertData& d, const std::string& path);

}  // namespace clsig
