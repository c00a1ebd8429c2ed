#pragma once

#include "magspec/types.hpp"

namespace magspec::dynamics {

// Magnetic degeneration profile rho(x1) and its derivative.
double rho(const ModelSymbol& sym, double x1);
double rho_prime(const ModelSymbol& sym, double x1);

// Pilot symbol value a = 1/2 (xi1^2 + (xi2 - mu rho/nu)^2 - V_const).
double eval_hamiltonian(const ModelSymbol& sym, const PhasePoint& p, double V_const = 1.0);
// General symbol value a = 1/2 (xi1^2 + sigma^2 (xi2 - mu phi rho/nu)^2 - V).
double eval_hamiltonian(const GeneralSymbol& sym, const PhasePoint& p);

struct WellGeometry {
  WellType wells = WellType::OneWell;
  double b1 = 0.0;  // turning points of one connected well (the right one
  double b2 = 0.0;  // when there are two); NaN for Degenerate/Empty
};

// Turning points of the zero-energy level set at conserved momentum k
// (V = 1 normalization). |k| within 1e-9 of 1 is classified Touching and
// refused by the integral operations below.
WellGeometry turning_points(const ModelSymbol& sym, double k);

// Period T(k), drift integral I(k) and drift velocity v(k) = I/T of the
// oscillation at momentum k; per single well in the TwoWells regime.
double period(const ModelSymbol& sym, double k);
double drift_integral(const ModelSymbol& sym, double k);
double drift_velocity(const ModelSymbol& sym, double k);

// All per-k invariants in one call (shared quadrature pass).
OrbitData orbit_data(const ModelSymbol& sym, double k);

// Critical momentum k* with I(k*) = 0, its derivative kappa = dI/dk(k*),
// omega_star = kappa/2 and the critical action S0 = action(k*, 0).
// Even parity: bisection on (0,1). Odd parity: k* = 0 exactly by symmetry,
// kappa from a one-sided derivative.
CriticalData find_kstar(const ModelSymbol& sym);

// Action S(xi2, tau) = loop integral of xi1 dx1 over one connected well of
// the level set {a = tau} at V = 1, i.e.
//   S = 2 * integral of sqrt((1 + 2 tau) - (xi2 - rho/nu)^2)_+ dx1.
// General potential values W follow from the exact shift
//   S_W(xi2, tau) = action(xi2, tau + (W - 1)/2).
double action(const ModelSymbol& sym, double xi2, double tau);

// Symplectic integration of the pilot flow (Stormer-Verlet splitting of
// a = 1/2 xi1^2 + U(x1; xi2), composed to fourth order). xi2 is conserved
// exactly by the scheme; x2 is transported exactly within each potential
// substep. Throws StepTooLarge if the recorded energy drift exceeds 1e-4.
Trajectory integrate_trajectory(const ModelSymbol& sym, const PhasePoint& start, double t_max,
                                double dt, double V_const = 1.0);

// Fixed-step implicit-midpoint integration of the general symbol (energy
// drift bounded, no exact conservation claimed).
Trajectory integrate_trajectory(const GeneralSymbol& sym, const PhasePoint& start, double t_max,
                                double dt);

struct DriftDecomposition {
  double v_est = 0.0;        // (x2(NT) - x2(0)) / (NT), N = floor(span/T)
  double residual_sup = 0.0;  // sup over one period of |x2(t) - v_est t - x2(0)|
};

// Split x2(t) into linear drift plus a periodic remainder. Requires the
// trajectory to span at least 3 periods (SpanTooShort otherwise).
DriftDecomposition decompose_drift(const Trajectory& traj, double T);

// x2-shift over one period of the orbit at momentum xi2, from trajectory
// integration. Near k* the shift behaves as 2 omega_star (xi2 - k*) to
// second order. Precondition: |xi2 - k*| <= 0.1.
double poincare_shift(const ModelSymbol& sym, double xi2);

}  // namespace magspec::dynamics
