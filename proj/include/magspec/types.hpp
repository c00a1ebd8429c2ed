#pragma once

#include <functional>
#include <vector>

namespace magspec {

enum class Parity { Even, Odd };

// Pilot-model Hamiltonian parameters. The magnetic degeneration profile is
//   rho(x1) = |x1|^nu          (Even)
//   rho(x1) = x1 |x1|^(nu-1)   (Odd)
// and the pilot symbol at coupling mu and constant potential V is
//   a = 1/2 (xi1^2 + (xi2 - mu rho/nu)^2 - V).
struct ModelSymbol {
  int nu = 2;
  Parity parity = Parity::Even;
  double mu = 1.0;  // rescaled dynamics uses mu = 1
};

// Variable-coefficient symbol a = 1/2 (xi1^2 + sigma^2 (xi2 - mu phi rho/nu)^2 - V)
// with sigma, phi, V smooth functions of (x1, x2). Defaults reproduce the
// pilot model.
struct GeneralSymbol {
  ModelSymbol base;
  std::function<double(double, double)> sigma = [](double, double) { return 1.0; };
  std::function<double(double, double)> phi = [](double, double) { return 1.0; };
  std::function<double(double, double)> V = [](double, double) { return 1.0; };
};

struct PhasePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
};

enum class WellType { TwoWells, OneWell, Touching, Degenerate, Empty };

// Classical invariants of the zero-energy orbit with conserved momentum k.
// In the TwoWells regime (Even parity, k > 1) all quantities are per single
// well (the right one); the mirror well follows by symmetry.
struct OrbitData {
  double k = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  WellType wells = WellType::OneWell;
  double T = 0.0;  // period
  double I = 0.0;  // drift integral over one period
  double v = 0.0;  // drift velocity I/T
};

struct TrajectorySample {
  double t = 0.0;
  PhasePoint z;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // uniformly spaced by dt
  double dt = 0.0;
  double energy0 = 0.0;
  double max_energy_drift = 0.0;
};

// Data at the critical momentum k* (zero-drift orbit): kappa = dI/dk at k*,
// omega_star = kappa/2, S0 = action of the critical orbit at level 0.
struct CriticalData {
  double kstar = 0.0;
  double kappa = 0.0;
  double omega_star = 0.0;
  double S0 = 0.0;
};

}  // namespace magspec
