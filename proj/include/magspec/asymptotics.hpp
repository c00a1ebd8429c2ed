#pragma once

#include <functional>
#include <vector>

#include "magspec/types.hpp"

namespace magspec::asymptotics {

// Field-strength bookkeeping. The two independent parameters are (mu, h);
// the semiclassical pair (hbar, gamma_bar) is related by
//   hbar = mu^(1/nu) h,  gamma_bar = mu^(-1/nu),  gamma_bar_1 = (mu h)^(-1/(nu-1))
// with the generic constants fixed to 1. All four are stored at
// construction so either parametrization round-trips exactly.
struct FieldParams {
  int nu = 2;
  Parity parity = Parity::Even;
  double mu = 1.0;
  double h = 0.1;
  double hbar = 0.1;
  double gamma_bar = 1.0;
  double gamma_bar_1 = 1.0;

  static FieldParams from_mu_h(int nu, Parity parity, double mu, double h);
  static FieldParams from_hbar_gamma(int nu, Parity parity, double hbar, double gamma_bar);
};

// Potential slice W(x2) = V(0, x2) and a nonnegative cutoff weight psi with
// compact support [support_lo, support_hi].
struct PotentialProfile {
  std::function<double(double)> W = [](double) { return 1.0; };
  std::function<double(double)> psi = [](double) { return 1.0; };
  double support_lo = -1.0;
  double support_hi = 1.0;
};

// Everything the correction comparison needs in one record. By construction
// corr_exact = n0_integral - emw0_integral with the same accumulation order.
struct CorrectionReport {
  double emw0_integral = 0.0;
  double n0_integral = 0.0;
  double corr_exact = 0.0;
  double corr_leading = 0.0;
  double corr_leading_refined = 0.0;
  double S0 = 0.0;
  double kappa = 0.0;
  double kstar = 0.0;
  double hbar = 0.0;
  double h = 0.0;
};

struct ScalingRow {
  double hbar = 0.0;
  double mu = 0.0;
  double h = 0.0;
  double n0_integral = 0.0;
  double emw0_integral = 0.0;
  double corr_exact = 0.0;
  double corr_leading = 0.0;
  double residual = 0.0;       // corr_exact - corr_leading
  double norm_corr = 0.0;      // h |corr_exact| hbar^(-1/2)
  double norm_residual = 0.0;  // h |residual| hbar^(-1)
};

// Landau-level density of the pilot Magnetic Weyl expression at (x1, x2):
// (2 pi)^(-1) mu h^(-1) |x1|^(nu-1) * #{ n >= 0 : (2n+1) mu h |x1|^(nu-1) < 2 tau + W(x2) }.
double emw_density(double x1, double x2, double tau, const FieldParams& fp,
                   const PotentialProfile& prof);

// x1-integral of the density above over the whole line: per-level closed
// form summed over Landau levels with an analytic tail bound of 1e-12
// relative (the series converges like n^(-nu/(nu-1))).
double emw0_strip_integral(const FieldParams& fp, const PotentialProfile& prof, double x2,
                           double tau);

// (2 pi h)^(-1) Int n0(xi2, hbar; W) dxi2, evaluated exactly for the step
// function n0 by locating every level-crossing root xi2 with lambda_n = 0
// and summing signed segment lengths. The domain is expanded automatically
// until n0 reaches 0 on the right; DomainNotClosed past the cap
// 10 hbar^(-nu/(nu-1)).
double n0_xi2_integral(const FieldParams& fp, double W);

// Exact correction term: n0_xi2_integral minus emw0_strip_integral at
// constant W, together with the leading sawtooth predictions and the
// critical-orbit data they use.
CorrectionReport corr_exact(const FieldParams& fp, double W);

// G(t) = Int_R ( frac(t + eta^2/2 + 1/2) - 1/2 ) deta, 1-periodic, zero
// mean, Hoelder-1/2. Evaluated by exact per-segment antiderivatives between
// consecutive jumps of the integrand with a paired-tail bound; absolute
// accuracy ~1e-8.
double sawtooth_G(double t);

// G1(t) = Int_0^t G - Int_0^1 (1 - s) G(s) ds: the 1-periodic, zero-mean
// antiderivative of G.
double sawtooth_G1(double t);

// Leading periodic-orbit correction
//   (2 pi)^(-1/2) h^(-1) hbar^(1/2) kappa^(-1/2) W^((nu-1)/(4 nu))
//     * G( -S0 W^((nu+1)/(2 nu)) / (2 pi hbar) ).
double corr_leading(const FieldParams& fp, double W, const CriticalData& crit);

// Same with the fitted O(hbar) phase correction kappa1 * hbar added to the
// argument of G. kappa1 is calibrated once from one run and reported, never
// asserted.
double corr_leading_refined(const FieldParams& fp, double W, const CriticalData& crit);

// (2 pi h)^(-1) IntInt n0(xi2, hbar; W(x2)) psi(x2) dxi2 dx2 by adaptive
// quadrature in x2 over the per-slice xi2 integral.
double counting_density(const FieldParams& fp, const PotentialProfile& prof);

// One row per hbar at fixed gamma_bar: the correction decomposition and its
// normalized magnitudes. Precondition: every hbar <= 0.3.
std::vector<ScalingRow> scaling_experiment(int nu, Parity parity,
                                           const std::vector<double>& hbar_list,
                                           double gamma_bar);

}  // namespace magspec::asymptotics
