#pragma once

#include "clsig/abelian.hpp"
#include "clsig/exact.hpp"
#include "clsig/seifert.hpp"
#include "clsig/signature.hpp"

#include <iosfwd>
#include <optional>

namespace clsig {

struct IntegrateOptions {
  long long grid = 1024;  // starting points per free dimension
  double tol = 0.02;      // refinement target for the doubling estimate
  int workers = 1;        // evaluation threads; result is worker-invariant
  bool refine = true;     // double the grid until tol or the point budget
  // Authorize the naive signature value at degenerate samples when no
  // doubled-link data is available (audit trail: counted in the result).
  bool fallback_degenerate = false;
  double zero_threshold = 1e-9;  // relative eigenvalue zero test
  // When set, per-sample rows for the final grid are written here:
  // omega_angles,signature,nullity,weight (decimals, LF endings).
  std::ostream* samples_out = nullptr;
};

struct IntegralResult {
  double value = 0.0;
  long long grid = 0;            // points per free dimension actually used
  double estimated_error = 0.0;  // |I_N - I_{N/2}| at the reported grid
  long long degenerate_samples = 0;
  // The per-component point budget (2^20) stopped refinement, or forced the
  // starting grid down. Reported, never raised; the CLI maps it to exit 3.
  bool budget_exceeded = false;
};

// Normalized-Haar average of the signature function over the subtorus cut
// out by the presentation. Sample points in the open stratum (no coordinate
// at angle 0) use the naive signature of `d`; degenerate sample points use
// the extended signature through `d_pm` when given, else the naive fallback
// when authorized, else unresolved_degeneracy is raised.
IntegralResult rho2(const ColoredSeifertData& d, const AbelianPresentation& p,
                    const ColoredSeifertData* d_pm, const IntegrateOptions& opts = {});

// Average of the signature over the full torus (midpoint grids never touch
// the degenerate locus).
IntegralResult r_invariant(const ColoredSeifertData& d, const IntegrateOptions& opts = {});

// Same integral as r_invariant; the name is reserved for data whose colored
// components have zero pairwise linking (a caller obligation that cannot be
// checked from the matrices).
IntegralResult rho0(const ColoredSeifertData& d, const IntegrateOptions& opts = {});

// Closed forms for the signature averages of torus-link families.
BigRat torus_R_knot(long long a);  // (a+1)(a-2)/3 for the (a,1-a) torus knot, a >= 2
BigRat torus_R_bb(long long b);    // (b-1)^2/3 for the (b,-b) torus link, b >= 1

}  // namespace clsig
