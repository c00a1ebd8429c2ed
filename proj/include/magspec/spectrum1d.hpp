#pragma once

#include <vector>

#include "magspec/types.hpp"

namespace magspec::spectrum1d {

// Parameters of the reduced 1D operator
//   a0 = 1/2 (hbar^2 D^2 + (xi2 - rho_nu(x)/nu)^2 - W)
// at fixed conserved momentum xi2. The model coupling mu is fixed to 1
// (rescaled units). W = 0 is allowed for positivity checks.
struct ReducedSymbol {
  ModelSymbol model;
  double xi2 = 0.0;
  double hbar = 0.1;
  double W = 1.0;
};

struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  long n = 0;  // number of interior points
  double dx() const { return (x_max - x_min) / static_cast<double>(n + 1); }
  double x(long i) const { return x_min + static_cast<double>(i + 1) * dx(); }
};

// Symmetric tridiagonal finite-difference matrix with Dirichlet walls.
struct ReducedOperator {
  ReducedSymbol sym;
  Grid grid;
  std::vector<double> diag;     // n entries: hbar^2/dx^2 + U(x_i)
  std::vector<double> offdiag;  // n-1 entries, all -hbar^2/(2 dx^2)
};

enum class Method { FiniteDifference, BohrSommerfeld };

struct EigenResult {
  std::vector<double> values;  // sorted ascending
  std::vector<int> parities;   // +1 even, -1 odd, 0 untagged; empirical only
  Method method = Method::FiniteDifference;
};

struct CountingResult {
  long n0 = 0;        // negative eigenvalues of the discrete operator
  double n0_weyl = 0;  // S / (2 pi hbar)
  double S = 0;        // total phase-space area of {a0 < 0} (both wells)
};

// Discretize the reduced operator. The box is grown until the potential
// clears window_top by a fixed margin on both walls, then padded; the grid
// spacing resolves the shortest local de Broglie wavelength in the window.
// refine divides the spacing (same box) for Richardson-style comparisons.
ReducedOperator build_operator(const ReducedSymbol& sym, double window_top,
                               int refine = 1);

// Number of matrix eigenvalues strictly below tau (Sturm sign-change count
// of the shifted LDL^T recurrence; exact for the discrete matrix).
long count_below(const ReducedOperator& op, double tau);

// All matrix eigenvalues in [lo, hi), each located by bisection on
// count_below to 1e-10 * max(1, |hi|) absolute accuracy.
EigenResult eigenvalues_in(const ReducedOperator& op, double lo, double hi);

// Negative-eigenvalue count n0 plus its phase-space (Weyl) approximation
// n0_weyl = S(xi2, 0; W) / (2 pi hbar), with S the total area of the
// classically allowed region (sum of both wells where there are two).
CountingResult n0(const ReducedSymbol& sym);

// Bohr-Sommerfeld spectrum in [lo, hi): all tau with
// S_per_well(xi2, tau)/(2 pi hbar) + 1/2 integer, found by bisection in tau
// (monotone since dS/dtau = T > 0). In the Even two-well regime each value
// is reported twice, once per parity class; tunneling splitting is ignored.
EigenResult bohr_sommerfeld(const ReducedSymbol& sym, double lo, double hi);

// Unit-normalized (grid-weighted, sum u_i^2 dx = 1) eigenvector for an
// isolated eigenvalue within 1e-6 of lambda, by inverse iteration.
std::vector<double> eigenfunction(const ReducedOperator& op, double lambda);

struct ProjectorDiag {
  Grid grid;
  std::vector<double> values;  // sum over lambda_n < tau of |u_n(x_i)|^2
};

// Diagonal of the spectral projector kernel below tau on the grid.
ProjectorDiag projector_diag(const ReducedSymbol& sym, double tau);

struct CurvePoint {
  double xi2 = 0.0;
  double lambda = 0.0;
  double dlambda = 0.0;   // divided differences along the grid
  double d2lambda = 0.0;
};

// The n-th eigenvalue (0-based global index) sampled over a xi2-grid, with
// a gap monitor: if the distance to a neighboring eigenvalue falls below
// 10x the bisection tolerance the curve is refused (CrossingDetected)
// rather than silently permuted. base.xi2 is ignored.
std::vector<CurvePoint> lambda_curve(const ReducedSymbol& base,
                                     const std::vector<double>& xi2_grid, long n);

struct GapReport {
  std::vector<double> hbars;
  std::vector<double> min_spacing;  // per hbar, consecutive spacings with |lambda| < 0.3
  double exponent = 0.0;            // log-log slope of min_spacing against hbar
  double ratio_lo = 0.0;            // band of lambda_n / (z^((nu-1)/nu) n) over the
  double ratio_hi = 0.0;            // large-z sample at hbar = 1
  double kstar_hbar = 0.0;          // argmin of |dlambda/dxi2| over the range (NaN if degenerate)
};

// Spacing statistics over a xi2 range and a list of hbar values, plus the
// large-z eigenvalue scaling band at hbar = 1.
GapReport gap_stats(const ReducedSymbol& base, double xi2_lo, double xi2_hi,
                    const std::vector<double>& hbar_list);

}  // namespace magspec::spectrum1d
