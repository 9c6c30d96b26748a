#include "clsig/seifert.hpp"

#include "clsig/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace clsig {

namespace {

constexpr int kMaxColors = 16;

std::string braid_label(const BraidWord& w) {
  std::ostringstream os;
  os << "braid closure s=" << w.strands << " w=";
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (i) os << ',';
    os << w.letters[i];
  }
  return os.str();
}

}  // namespace

void validate(const BraidWord& w) {
  if (w.strands < 1) throw input_error("braid word needs at least one strand");
  for (int letter : w.letters) {
    if (letter == 0) throw input_error("braid letter 0 is not a generator");
    int idx = std::abs(letter);
    if (idx > w.strands - 1) {
      std::ostringstream os;
      os << "braid letter " << letter << " out of range for " << w.strands << " strands";
      throw input_error(os.str());
    }
  }
}

std::string sign_key(unsigned mask, int colors) {
  std::string key(static_cast<size_t>(colors), '+');
  for (int i = 0; i < colors; ++i) {
    if (mask & (1u << i)) key[static_cast<size_t>(i)] = '-';
  }
  return key;
}

unsigned mask_of_key(const std::string& key) {
  if (key.empty() || key.size() > static_cast<size_t>(kMaxColors)) {
    throw input_error("sign-vector key must have 1 to 16 characters: \"" + key + "\"");
  }
  unsigned mask = 0;
  for (size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '-') {
      mask |= (1u << i);
    } else if (key[i] != '+') {
      throw input_error("sign-vector key may contain only '+' and '-': \"" + key + "\"");
    }
  }
  return mask;
}

std::vector<std::string> validate(const ColoredSeifertData& d) {
  std::vector<std::string> violations;
  if (d.colors < 1 || d.colors > kMaxColors) {
    violations.push_back("colors must lie in [1, 16]");
    return violations;
  }
  if (d.dim < 0) violations.push_back("dim must be nonnegative");
  const size_t expected = size_t{1} << d.colors;
  if (d.matrices.size() != expected) {
    std::ostringstream os;
    os << "incomplete index set: expected " << expected << " sign vectors, have "
       << d.matrices.size();
    violations.push_back(os.str());
    return violations;
  }
  for (unsigned mask = 0; mask < expected; ++mask) {
    const IntMat& m = d.matrices[mask];
    if (m.rows() != d.dim || m.cols() != d.dim) {
      violations.push_back("matrix for \"" + sign_key(mask, d.colors) + "\" is not dim x dim");
    }
  }
  if (!violations.empty()) return violations;
  const unsigned full = static_cast<unsigned>(expected - 1);
  for (unsigned mask = 0; mask < expected; ++mask) {
    unsigned opp = full ^ mask;
    if (mask > opp) continue;
    if (d.matrices[opp] != d.matrices[mask].transpose()) {
      violations.push_back("transpose symmetry broken between \"" + sign_key(mask, d.colors) +
                           "\" and \"" + sign_key(opp, d.colors) + "\"");
    }
  }
  return violations;
}

void require_valid(const ColoredSeifertData& d) {
  std::vector<std::string> violations = validate(d);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid Seifert data";
  if (!d.label.empty()) os << " (" << d.label << ")";
  for (const std::string& v : violations) os << "; " << v;
  throw input_error(os.str());
}

namespace {

ColoredSeifertData one_color(IntMat a, std::string label) {
  ColoredSeifertData d;
  d.colors = 1;
  d.dim = static_cast<int>(a.rows());
  d.label = std::move(label);
  d.matrices.resize(2);
  d.matrices[1] = a.transpose();
  d.matrices[0] = std::move(a);
  return d;
}

}  // namespace

ColoredSeifertData braid_seifert(const BraidWord& w, const std::string& label) {
  validate(w);

  // Positions of each generator's occurrences, in word order.
  std::vector<std::vector<int>> occ(static_cast<size_t>(w.strands));
  for (size_t p = 0; p < w.letters.size(); ++p) {
    occ[static_cast<size_t>(std::abs(w.letters[p]))].push_back(static_cast<int>(p));
  }
  for (int g = 1; g <= w.strands - 1; ++g) {
    if (occ[static_cast<size_t>(g)].empty()) {
      std::ostringstream os;
      os << "closure has a disconnected Seifert surface: generator " << g
         << " never occurs; build the pieces separately and use a split union";
      throw input_error(os.str());
    }
  }

  // Basis loops: one per consecutive pair of occurrences of a generator.
  struct Loop {
    int gen;
    int p1, p2;  // word positions of the two bands, p1 < p2
    int e1, e2;  // signs of those bands
  };
  std::vector<Loop> loops;
  for (int g = 1; g <= w.strands - 1; ++g) {
    const auto& pos = occ[static_cast<size_t>(g)];
    for (size_t r = 0; r + 1 < pos.size(); ++r) {
      Loop l;
      l.gen = g;
      l.p1 = pos[r];
      l.p2 = pos[r + 1];
      l.e1 = w.letters[static_cast<size_t>(l.p1)] > 0 ? 1 : -1;
      l.e2 = w.letters[static_cast<size_t>(l.p2)] > 0 ? 1 : -1;
      loops.push_back(l);
    }
  }

  const int m = static_cast<int>(loops.size());
  IntMat a = IntMat::Zero(m, m);

  for (int r = 0; r < m; ++r) {
    a(r, r) = -(loops[r].e1 + loops[r].e2) / 2;
  }
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) {
      if (r == s) continue;
      const Loop& x = loops[static_cast<size_t>(r)];
      const Loop& y = loops[static_cast<size_t>(s)];
      if (x.gen == y.gen) {
        // Consecutive loops share a band; the shared band's sign decides
        // which side of the pushoff picks up the crossing.
        if (x.p2 == y.p1) {
          a(r, s) += (1 + x.e2) / 2;
        } else if (y.p2 == x.p1) {
          a(r, s) += (y.e2 - 1) / 2;
        }
      } else if (y.gen == x.gen + 1) {
        // Interleaved loops on adjacent generators link once; nested or
        // disjoint occurrence intervals do not link.
        if (x.p1 < y.p1 && y.p1 < x.p2 && x.p2 < y.p2) {
          a(r, s) += 1;
        } else if (y.p1 < x.p1 && x.p1 < y.p2 && y.p2 < x.p2) {
          a(r, s) += -1;
        }
      }
    }
  }

  return one_color(std::move(a), label.empty() ? braid_label(w) : label);
}

ColoredSeifertData torus_link_data(int p, int q) {
  if (p < 1) throw input_error("torus link requires p >= 1");
  std::ostringstream name;
  name << "T(" << p << "," << q << ")";
  if (q < 0) {
    ColoredSeifertData d = mirror(torus_link_data(p, -q));
    d.label = name.str();
    return d;
  }
  BraidWord w;
  w.strands = p;
  w.letters.reserve(static_cast<size_t>(q) * static_cast<size_t>(p > 0 ? p - 1 : 0));
  for (int rep = 0; rep < q; ++rep) {
    for (int g = 1; g <= p - 1; ++g) w.letters.push_back(g);
  }
  return braid_seifert(w, name.str());
}

ColoredSeifertData twist_knot_data(long long n) {
  IntMat a(2, 2);
  a << n, 1, 0, -1;
  std::ostringstream name;
  name << "twist knot n=" << n;
  return one_color(std::move(a), name.str());
}

IntMat twist_sum_matrix(long long n) {
  IntMat v = IntMat::Zero(4, 4);
  v(0, 0) = n;
  v(0, 1) = 1;
  v(1, 1) = -1;
  v(2, 2) = n;
  v(2, 3) = 1;
  v(3, 3) = -1;
  return v;
}

ColoredSeifertData split_union(const ColoredSeifertData& d1, const ColoredSeifertData& d2) {
  require_valid(d1);
  require_valid(d2);
  if (d1.colors + d2.colors > kMaxColors) {
    throw input_error("split union exceeds the supported number of colors");
  }
  ColoredSeifertData d;
  d.colors = d1.colors + d2.colors;
  d.dim = d1.dim + d2.dim;
  d.label = "split_union(" + d1.label + ", " + d2.label + ")";
  d.matrices.resize(size_t{1} << d.colors);
  const unsigned count1 = 1u << d1.colors;
  const unsigned count2 = 1u << d2.colors;
  for (unsigned m2 = 0; m2 < count2; ++m2) {
    for (unsigned m1 = 0; m1 < count1; ++m1) {
      IntMat block = IntMat::Zero(d.dim, d.dim);
      block.topLeftCorner(d1.dim, d1.dim) = d1.matrices[m1];
      block.bottomRightCorner(d2.dim, d2.dim) = d2.matrices[m2];
      d.matrices[(m2 << d1.colors) | m1] = std::move(block);
    }
  }
  return d;
}

ColoredSeifertData mirror(const ColoredSeifertData& d) {
  require_valid(d);
  ColoredSeifertData m = d;
  m.label = "mirror(" + d.label + ")";
  for (auto& mat : m.matrices) mat = (-mat.transpose()).eval();
  return m;
}

// --- File format -------------------------------------------------------------

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ColoredSeifertData parse_seifert_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(origin + ": not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw input_error(origin + ": top level must be an object");
  for (const char* field : {"colors", "dim", "matrices"}) {
    if (!doc.contains(field)) {
      throw input_error(origin + ": missing required field \"" + field + "\"");
    }
  }
  ColoredSeifertData d;
  try {
    d.colors = doc.at("colors").get<int>();
    d.dim = doc.at("dim").get<int>();
    d.label = doc.value("label", std::string{});
  } catch (const json::exception& e) {
    throw input_error(origin + ": malformed header field: " + e.what());
  }
  if (d.colors < 1 || d.colors > kMaxColors) {
    throw input_error(origin + ": colors must lie in [1, 16]");
  }
  if (d.dim < 0) throw input_error(origin + ": dim must be nonnegative");
  const json& mats = doc.at("matrices");
  if (!mats.is_object()) throw input_error(origin + ": \"matrices\" must be an object");
  const size_t expected = size_t{1} << d.colors;
  d.matrices.assign(expected, IntMat());
  std::vector<bool> seen(expected, false);
  for (auto it = mats.begin(); it != mats.end(); ++it) {
    const std::string& key = it.key();
    if (key.size() != static_cast<size_t>(d.colors)) {
      throw input_error(origin + ": sign key \"" + key + "\" must have length " +
                        std::to_string(d.colors));
    }
    unsigned mask = mask_of_key(key);
    if (seen[mask]) throw input_error(origin + ": duplicate sign key \"" + key + "\"");
    seen[mask] = true;
    const json& rows = it.value();
    if (!rows.is_array() || rows.size() != static_cast<size_t>(d.dim)) {
      throw input_error(origin + ": matrix \"" + key + "\" must be an array of " +
                        std::to_string(d.dim) + " rows");
    }
    IntMat m(d.dim, d.dim);
    for (int i = 0; i < d.dim; ++i) {
      const json& row = rows[static_cast<size_t>(i)];
      if (!row.is_array() || row.size() != static_cast<size_t>(d.dim)) {
        throw input_error(origin + ": matrix \"" + key + "\" row " + std::to_string(i) +
                          " must have " + std::to_string(d.dim) + " integer entries");
      }
      for (int j = 0; j < d.dim; ++j) {
        const json& cell = row[static_cast<size_t>(j)];
        if (!cell.is_number_integer()) {
          throw input_error(origin + ": matrix \"" + key + "\" entry (" + std::to_string(i) +
                            "," + std::to_string(j) + ") must be an integer");
        }
        m(i, j) = cell.get<long long>();
      }
    }
    d.matrices[mask] = std::move(m);
  }
  for (unsigned mask = 0; mask < expected; ++mask) {
    if (!seen[mask]) {
      throw input_error(origin + ": incomplete index set: missing sign key \"" +
                        sign_key(mask, d.colors) + "\"");
    }
  }
  std::vector<std::string> violations = validate(d);
  if (!violations.empty()) {
    std::ostringstream os;
    os << origin << ": invalid Seifert data";
    for (const std::string& v : violations) os << "; " << v;
    throw input_error(os.str());
  }
  return d;
}

ColoredSeifertData load_seifert_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open Seifert data file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_seifert_json(buf.str(), path);
}

std::string to_canonical_json(const ColoredSeifertData& d) {
  require_valid(d);
  ordered_json doc;
  doc["colors"] = d.colors;
  doc["dim"] = d.dim;
  doc["label"] = d.label;
  ordered_json mats = ordered_json::object();
  std::vector<std::string> keys;
  const size_t count = size_t{1} << d.colors;
  keys.reserve(count);
  for (unsigned mask = 0; mask < count; ++mask) keys.push_back(sign_key(mask, d.colors));
  std::sort(keys.begin(), keys.end());
  for (const std::string& key : keys) {
    const IntMat& m = d.matrices[mask_of_key(key)];
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < d.dim; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < d.dim; ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    mats[key] = std::move(rows);
  }
  doc["matrices"] = std::move(mats);
  return doc.dump(2) + "\n";
}

void save_seifert_file(const ColoredSeifertData& d, const std::string& path) {
  atomic_write_file(path, to_canonical_json(d));
}

}  // namespace clsig
