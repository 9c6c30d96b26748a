#include "clsig/integrate.hpp"

#include "clsig/util.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace clsig {

namespace {

constexpr long long kPointBudget = 1ll << 20;  // per torsion component
constexpr long long kChunk = 4096;             // fixed, worker-count independent

struct SampleRow {
  std::vector<Turns> angles;
  int signature = 0;
  int nullity = 0;
};

struct ChunkResult {
  long long signature_sum = 0;
  long long degenerate = 0;
  bool unresolved = false;
  std::vector<SampleRow> rows;  // only filled when CSV output is requested
};

struct GridOutcome {
  double value = 0.0;
  long long degenerate = 0;
};

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Evaluates one full grid. The chunk layout depends only on the grid, never
// on the worker count, and chunk results are combined in index order with
// exact integer sums, so the outcome (and any CSV bytes) is identical for
// any number of workers.
GridOutcome evaluate_grid(const ColoredSeifertData& d, const ColoredSeifertData* d_pm,
                          const SubtorusParam& sub, long long n_per_dim,
                          const IntegrateOptions& opts, std::ostream* csv) {
  SampleGrid grid(sub, n_per_dim);
  const long long total = grid.total();
  const long long chunk_count = (total + kChunk - 1) / kChunk;
  const bool keep_rows = csv != nullptr;

  std::vector<ChunkResult> results(static_cast<size_t>(chunk_count));
  std::atomic<long long> next_chunk{0};

  auto run_chunk = [&](long long c) {
    ChunkResult& out = results[static_cast<size_t>(c)];
    const long long begin = c * kChunk;
    const long long end = std::min(total, begin + kChunk);
    if (keep_rows) out.rows.reserve(static_cast<size_t>(end - begin));
    for (long long idx = begin; idx < end; ++idx) {
      GridSample s = grid.at(idx);
      SigResult sig;
      if (s.point.in_star()) {
        sig = cf_signature(d, s.point, opts.zero_threshold);
      } else {
        ++out.degenerate;
        if (d_pm != nullptr) {
          sig = sigma_hat(*d_pm, s.point, opts.zero_threshold);
        } else if (opts.fallback_degenerate) {
          sig = cf_signature(d, s.point, opts.zero_threshold);
        } else {
          out.unresolved = true;
          continue;
        }
      }
      out.signature_sum += sig.signature;
      if (keep_rows) {
        SampleRow row;
        row.angles.reserve(s.point.coords.size());
        for (const Angle& a : s.point.coords) row.angles.push_back(a.rational());
        row.signature = sig.signature;
        row.nullity = sig.nullity;
        out.rows.push_back(std::move(row));
      }
    }
  };

  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    for (long long c = 0; c < chunk_count; ++c) run_chunk(c);
  } else {
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        try {
          for (;;) {
            long long c = next_chunk.fetch_add(1);
            if (c >= chunk_count) return;
            run_chunk(c);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  long long signature_sum = 0;
  long long degenerate = 0;
  bool unresolved = false;
  for (const ChunkResult& r : results) {
    signature_sum += r.signature_sum;
    degenerate += r.degenerate;
    unresolved = unresolved || r.unresolved;
  }
  if (unresolved) {
    throw unresolved_degeneracy(
        "sample point has a coordinate at angle 0 and no resolution is authorized: supply "
        "doubled-link data or enable the degenerate fallback");
  }

  if (csv != nullptr) {
    const double w = 1.0 / static_cast<double>(total);
    const std::string weight = format_double(w);
    *csv << "omega_angles,signature,nullity,weight\n";
    for (const ChunkResult& r : results) {
      for (const SampleRow& row : r.rows) {
        for (size_t i = 0; i < row.angles.size(); ++i) {
          if (i) *csv << ';';
          *csv << format_double(row.angles[i].value());
        }
        *csv << ',' << row.signature << ',' << row.nullity << ',' << weight << '\n';
      }
    }
  }

  GridOutcome out;
  out.value = static_cast<double>(signature_sum) / static_cast<double>(total);
  out.degenerate = degenerate;
  return out;
}

long long clamp_to_budget(long long n, int rank, bool* clamped) {
  if (rank == 0) return n;
  auto fits = [&](long long candidate) {
    long long points = 1;
    for (int r = 0; r < rank; ++r) {
      if (points > kPointBudget / candidate) return false;
      points *= candidate;
    }
    return points <= kPointBudget;
  };
  if (fits(n)) return n;
  long long best = 1;
  while (fits(best * 2)) best *= 2;
  // Binary-search the largest admissible N between best and 2*best.
  long long lo = best, hi = best * 2;
  while (lo + 1 < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  *clamped = true;
  return lo;
}

IntegralResult integrate_over(const ColoredSeifertData& d, const ColoredSeifertData* d_pm,
                              const SubtorusParam& sub, const IntegrateOptions& opts) {
  require_valid(d);
  if (d_pm != nullptr) {
    require_valid(*d_pm);
    if (d_pm->colors != 2 * d.colors) {
      throw input_error("doubled-link data must have exactly twice as many colors as the data");
    }
  }
  if (sub.ambient != d.colors) {
    throw input_error("presentation generator count must match the number of colors");
  }
  if (opts.grid < 1) throw input_error("grid size must be at least 1");
  if (!(opts.tol > 0.0)) throw input_error("tolerance must be positive");

  IntegralResult res;

  // Rank 0: the integral is a finite average, exact at any grid size.
  if (sub.rank == 0) {
    GridOutcome g = evaluate_grid(d, d_pm, sub, 1, opts, opts.samples_out);
    res.value = g.value;
    res.grid = 1;
    res.estimated_error = 0.0;
    res.degenerate_samples = g.degenerate;
    return res;
  }

  bool clamped = false;
  long long n = clamp_to_budget(opts.grid, sub.rank, &clamped);
  res.budget_exceeded = clamped;

  GridOutcome coarse = evaluate_grid(d, d_pm, sub, std::max(1ll, n / 2), opts, nullptr);
  GridOutcome current = evaluate_grid(d, d_pm, sub, n, opts, nullptr);
  double err = std::abs(current.value - coarse.value);

  if (opts.refine && !clamped) {
    while (err >= opts.tol) {
      bool next_clamped = false;
      long long doubled = clamp_to_budget(n * 2, sub.rank, &next_clamped);
      if (next_clamped || doubled <= n) {
        res.budget_exceeded = true;
        break;
      }
      coarse = current;
      n = doubled;
      current = evaluate_grid(d, d_pm, sub, n, opts, nullptr);
      err = std::abs(current.value - coarse.value);
    }
  }

  if (opts.samples_out != nullptr) {
    current = evaluate_grid(d, d_pm, sub, n, opts, opts.samples_out);
  }

  res.value = current.value;
  res.grid = n;
  res.estimated_error = err;
  res.degenerate_samples = current.degenerate;
  return res;
}

}  // namespace

IntegralResult rho2(const ColoredSeifertData& d, const AbelianPresentation& p,
                    const ColoredSeifertData* d_pm, const IntegrateOptions& opts) {
  return integrate_over(d, d_pm, subtorus(p), opts);
}

IntegralResult r_invariant(const ColoredSeifertData& d, const IntegrateOptions& opts) {
  require_valid(d);
  return integrate_over(d, nullptr, full_torus(d.colors), opts);
}

IntegralResult rho0(const ColoredSeifertData& d, const IntegrateOptions& opts) {
  return r_invariant(d, opts);
}

BigRat torus_R_knot(long long a) {
  if (a < 2) throw input_error("torus-knot closed form requires a >= 2");
  return BigRat(BigInt(a + 1) * BigInt(a - 2), BigInt(3));
}

BigRat torus_R_bb(long long b) {
  if (b < 1) throw input_error("torus-link closed form requires b >= 1");
  return BigRat(BigInt(b - 1) * BigInt(b - 1), BigInt(3));
}

}  // namespace clsig
