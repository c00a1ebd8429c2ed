#include "magspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magspec/errors.hpp"
#include "magspec/quadrature.hpp"

namespace magspec::dynamics {

namespace {

constexpr double kTouchBand = 1e-9;  // refusal band around |k| = 1

enum class Kind { Period, Drift, Area };

double weight_factor(Kind kind, double theta) {
  switch (kind) {
    case Kind::Period:
      return 1.0;
    case Kind::Drift:
      return std::cos(theta);
    case Kind::Area: {
      const double s = std::sin(theta);
      return s * s;
    }
  }
  return 0.0;
}

// Master theta-form quadrature for the level set (xi2 - rho/nu)^2 + xi1^2 = r^2
// at reduced momentum ke = xi2/r. Each case integrates
//   (nu q(theta))^(1/nu - 1)
// against the Kind-specific weight, where q is cos(theta) shifted so that the
// turning point sits at an endpoint; q is evaluated through the product form
//   cos(theta) - cos(theta_t) = 2 sin((theta_t+theta)/2) sin((theta_t-theta)/2)
// with the small half-angle taken from the quadrature's exact endpoint
// distance, which keeps the integrand accurate right up to the singularity.
// Returned values are per single well; sign conventions are applied here.
double master_integral(const ModelSymbol& sym, double ke, double r, Kind kind) {
  const double nu = sym.nu;
  const double expo = 1.0 / nu - 1.0;
  const double rpow = std::pow(r, expo);
  const double quad_tol = 1e-11;
  // The orbit parametrization is rho/nu = r (ke + cos theta), xi1 = r sin theta,
  // p2 = -r cos theta, so dt = (nu r (ke + cos theta))^(1/nu - 1) dtheta and the
  // three integrands pick up r^0 (T), r^1 (I), r^2 (S) on top of rpow.
  auto r_scale = [&](Kind k2) {
    return k2 == Kind::Area ? r * r : (k2 == Kind::Drift ? r : 1.0);
  };

  auto g = [&](double q) { return std::pow(nu * q, expo); };

  if (sym.parity == Parity::Even ? std::fabs(ke) < 1.0 : false) {
    // Even one-well: theta in [0, theta_t], singular at the upper endpoint.
    const double theta_t = std::acos(-ke);
    const double val = tanh_sinh(
        [&](double x, double, double db) {
          const double q = 2.0 * std::sin(0.5 * (theta_t + x)) * std::sin(0.5 * db);
          return weight_factor(kind, x) * g(q);
        },
        0.0, theta_t, quad_tol);
    const double fac = (kind == Kind::Drift) ? -4.0 : 4.0;
    return fac * r_scale(kind) * rpow * val;
  }

  if (sym.parity == Parity::Odd && std::fabs(ke) < 1.0) {
    // Odd full-range well: theta in [0, pi] with an interior integrable
    // singularity at theta_s; split there and keep |q| through the stable
    // product form on each side.
    const double theta_s = std::acos(-ke);
    auto left = [&](double x, double, double db) {
      const double q = 2.0 * std::sin(0.5 * (theta_s + x)) * std::sin(0.5 * db);
      return weight_factor(kind, x) * g(q);
    };
    auto right = [&](double x, double da, double) {
      const double q = 2.0 * std::sin(0.5 * (x + theta_s)) * std::sin(0.5 * da);
      return weight_factor(kind, x) * g(q);
    };
    const double val =
        tanh_sinh(left, 0.0, theta_s, quad_tol) + tanh_sinh(right, theta_s, kPi, quad_tol);
    const double fac = (kind == Kind::Drift) ? -2.0 : 2.0;
    return fac * r_scale(kind) * rpow * val;
  }

  // Detached single well at |ke| > 1 (Even: the right well of the pair;
  // Odd: the only well, on the side of sign(ke)). Smooth integrand:
  // q = (|ke| - 1) + 2 sin^2((pi - theta)/2) >= |ke| - 1 > 0.
  const double kk = std::fabs(ke);
  const double km1 = kk - 1.0;
  const double val = tanh_sinh(
      [&](double x, double, double db) {
        const double sd = std::sin(0.5 * db);
        const double q = km1 + 2.0 * sd * sd;
        return weight_factor(kind, x) * g(q);
      },
      0.0, kPi, quad_tol);
  double fac = (kind == Kind::Drift) ? -2.0 : 2.0;
  if (kind == Kind::Drift && ke < 0.0) fac = -fac;  // Odd mirror well
  return fac * r_scale(kind) * rpow * val;
}

void refuse_non_oscillating(const WellGeometry& w, double k) {
  if (w.wells == WellType::Touching || w.wells == WellType::Degenerate) {
    throw DegenerateLevel("level set at k = " + std::to_string(k) +
                          " touches the separatrix or degenerates to a point");
  }
  if (w.wells == WellType::Empty) {
    throw EmptyLevel("no classically allowed region at k = " + std::to_string(k));
  }
}

}  // namespace

double rho(const ModelSymbol& sym, double x1) {
  const double p = std::pow(std::fabs(x1), sym.nu);
  if (sym.parity == Parity::Even) return p;
  return x1 < 0.0 ? -p : p;
}

double rho_prime(const ModelSymbol& sym, double x1) {
  const double p = sym.nu * std::pow(std::fabs(x1), sym.nu - 1);
  if (sym.parity == Parity::Even) return x1 < 0.0 ? -p : p;
  return p;
}

double eval_hamiltonian(const ModelSymbol& sym, const PhasePoint& p, double V_const) {
  const double p2 = p.xi2 - sym.mu * rho(sym, p.x1) / sym.nu;
  return 0.5 * (p.xi1 * p.xi1 + p2 * p2 - V_const);
}

double eval_hamiltonian(const GeneralSymbol& sym, const PhasePoint& p) {
  const double sg = sym.sigma(p.x1, p.x2);
  const double ph = sym.phi(p.x1, p.x2);
  const double p2 = p.xi2 - sym.base.mu * ph * rho(sym.base, p.x1) / sym.base.nu;
  return 0.5 * (p.xi1 * p.xi1 + sg * sg * p2 * p2 - sym.V(p.x1, p.x2));
}

WellGeometry turning_points(const ModelSymbol& sym, double k) {
  const double nu = sym.nu;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto root = [&](double s) { return std::pow(nu * s, 1.0 / nu); };
  WellGeometry w;
  if (sym.parity == Parity::Even) {
    if (std::fabs(k - 1.0) <= kTouchBand) {
      w.wells = WellType::Touching;
      w.b1 = 0.0;
      w.b2 = root(k + 1.0);
    } else if (std::fabs(k + 1.0) <= kTouchBand) {
      w.wells = WellType::Degenerate;
      w.b1 = w.b2 = 0.0;
    } else if (k > 1.0) {
      w.wells = WellType::TwoWells;
      w.b1 = root(k - 1.0);
      w.b2 = root(k + 1.0);
    } else if (k > -1.0) {
      w.wells = WellType::OneWell;
      w.b2 = root(k + 1.0);
      w.b1 = -w.b2;
    } else {
      w.wells = WellType::Empty;
      w.b1 = w.b2 = nan;
    }
  } else {
    if (std::fabs(k - 1.0) <= kTouchBand || std::fabs(k + 1.0) <= kTouchBand) {
      w.wells = WellType::Touching;
      w.b1 = k > 0.0 ? 0.0 : -root(std::fabs(k) + 1.0);
      w.b2 = k > 0.0 ? root(k + 1.0) : 0.0;
    } else if (k > 1.0) {
      w.wells = WellType::OneWell;
      w.b1 = root(k - 1.0);
      w.b2 = root(k + 1.0);
    } else if (k < -1.0) {
      w.wells = WellType::OneWell;
      w.b1 = -root(-k + 1.0);
      w.b2 = -root(-k - 1.0);
    } else {
      w.wells = WellType::OneWell;
      w.b1 = -root(1.0 - k);
      w.b2 = root(1.0 + k);
    }
  }
  return w;
}

double period(const ModelSymbol& sym, double k) {
  refuse_non_oscillating(turning_points(sym, k), k);
  return master_integral(sym, k, 1.0, Kind::Period);
}

double drift_integral(const ModelSymbol& sym, double k) {
  refuse_non_oscillating(turning_points(sym, k), k);
  return master_integral(sym, k, 1.0, Kind::Drift);
}

double drift_velocity(const ModelSymbol& sym, double k) {
  refuse_non_oscillating(turning_points(sym, k), k);
  return master_integral(sym, k, 1.0, Kind::Drift) / master_integral(sym, k, 1.0, Kind::Period);
}

OrbitData orbit_data(const ModelSymbol& sym, double k) {
  const WellGeometry w = turning_points(sym, k);
  refuse_non_oscillating(w, k);
  OrbitData d;
  d.k = k;
  d.b1 = w.b1;
  d.b2 = w.b2;
  d.wells = w.wells;
  d.T = master_integral(sym, k, 1.0, Kind::Period);
  d.I = master_integral(sym, k, 1.0, Kind::Drift);
  d.v = d.I / d.T;
  return d;
}

CriticalData find_kstar(const ModelSymbol& sym) {
  CriticalData out;
  if (sym.parity == Parity::Odd) {
    out.kstar = 0.0;  // the only zero of I, by antisymmetry
    auto D = [&](double d) { return drift_integral(sym, d) / d; };
    out.kappa = richardson2(D(1e-4), D(5e-5));
  } else {
    auto I = [&](double k) { return drift_integral(sym, k); };
    double lo = 1e-6;
    double hi = 1.0 - 1e-6;
    double flo = I(lo);
    const double fhi = I(hi);
    if ((flo < 0.0) == (fhi < 0.0)) {
      throw NoBracket("drift integral does not change sign on (0,1); quadrature failure");
    }
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = I(mid);
      if (fmid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    out.kstar = 0.5 * (lo + hi);
    auto D = [&](double s) { return (I(out.kstar + s) - I(out.kstar - s)) / (2.0 * s); };
    out.kappa = richardson2(D(1e-4), D(5e-5));
  }
  out.omega_star = 0.5 * out.kappa;
  out.S0 = action(sym, out.kstar, 0.0);
  return out;
}

double action(const ModelSymbol& sym, double xi2, double tau) {
  const double r2 = 1.0 + 2.0 * tau;
  if (r2 <= 0.0) throw EmptyLevel("level 2 tau + 1 <= 0 has no classical region");
  const double r = std::sqrt(r2);
  const double ke = xi2 / r;
  if (std::fabs(std::fabs(ke) - 1.0) <= kTouchBand) {
    throw DegenerateLevel("action refused inside the separatrix band |xi2/r| ~ 1");
  }
  if (sym.parity == Parity::Even && ke < -1.0) {
    throw EmptyLevel("empty level set: xi2/r < -1 for the even model");
  }
  return master_integral(sym, ke, r, Kind::Area);
}

namespace {

// One Stormer-Verlet step of the pilot flow. The potential substep holds x1
// fixed, so the x2 transport by p2(x1) within it is exact; xi2 never moves.
inline void sv_step(const ModelSymbol& sym, PhasePoint& z, double h) {
  const double inv_nu = 1.0 / sym.nu;
  auto kick = [&](double hh) {
    const double p2 = z.xi2 - sym.mu * rho(sym, z.x1) * inv_nu;
    z.xi1 += hh * p2 * sym.mu * rho_prime(sym, z.x1) * inv_nu;
    z.x2 += hh * p2;
  };
  kick(0.5 * h);
  z.x1 += h * z.xi1;
  kick(0.5 * h);
}

}  // namespace

Trajectory integrate_trajectory(const ModelSymbol& sym, const PhasePoint& start, double t_max,
                                double dt, double V_const) {
  if (dt <= 0.0 || t_max <= 0.0) throw PreconditionViolated("need dt > 0 and t_max > 0");
  const long n_steps = std::max(1L, static_cast<long>(std::llround(t_max / dt)));
  // Triple-composition coefficients that cancel the second-order error of
  // the base splitting step.
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double w0 = 1.0 - 2.0 * w1;

  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  PhasePoint z = start;
  traj.energy0 = eval_hamiltonian(sym, z, V_const);
  traj.samples.push_back({0.0, z});
  double max_drift = 0.0;
  for (long i = 1; i <= n_steps; ++i) {
    sv_step(sym, z, w1 * dt);
    sv_step(sym, z, w0 * dt);
    sv_step(sym, z, w1 * dt);
    traj.samples.push_back({static_cast<double>(i) * dt, z});
    max_drift = std::max(max_drift, std::fabs(eval_hamiltonian(sym, z, V_const) - traj.energy0));
  }
  traj.max_energy_drift = max_drift;
  if (max_drift > 1e-4) {
    throw StepTooLarge("energy drift " + std::to_string(max_drift) + " exceeds 1e-4; halve dt");
  }
  return traj;
}

namespace {

struct FlowVec {
  double x1, x2, xi1, xi2;
};

FlowVec general_flow(const GeneralSymbol& sym, const PhasePoint& z) {
  const double sg = sym.sigma(z.x1, z.x2);
  const double ph = sym.phi(z.x1, z.x2);
  const double p2 = z.xi2 - sym.base.mu * ph * rho(sym.base, z.x1) / sym.base.nu;
  auto a_of_x = [&](double x1, double x2) {
    PhasePoint q{x1, x2, z.xi1, z.xi2};
    return eval_hamiltonian(sym, q);
  };
  // The coefficient functions are opaque callables, so the x-gradient is
  // taken numerically; the xi-gradient is analytic.
  const double s1 = 1e-6 * std::max(1.0, std::fabs(z.x1));
  const double s2 = 1e-6 * std::max(1.0, std::fabs(z.x2));
  const double da_dx1 = (a_of_x(z.x1 + s1, z.x2) - a_of_x(z.x1 - s1, z.x2)) / (2.0 * s1);
  const double da_dx2 = (a_of_x(z.x1, z.x2 + s2) - a_of_x(z.x1, z.x2 - s2)) / (2.0 * s2);
  return {z.xi1, sg * sg * p2, -da_dx1, -da_dx2};
}

}  // namespace

Trajectory integrate_trajectory(const GeneralSymbol& sym, const PhasePoint& start, double t_max,
                                double dt) {
  if (dt <= 0.0 || t_max <= 0.0) throw PreconditionViolated("need dt > 0 and t_max > 0");
  const long n_steps = std::max(1L, static_cast<long>(std::llround(t_max / dt)));
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  PhasePoint z = start;
  traj.energy0 = eval_hamiltonian(sym, z);
  traj.samples.push_back({0.0, z});
  double max_drift = 0.0;
  for (long i = 1; i <= n_steps; ++i) {
    PhasePoint zm = z;
    for (int it = 0; it < 16; ++it) {
      const FlowVec f = general_flow(sym, zm);
      const PhasePoint znew{z.x1 + 0.5 * dt * f.x1, z.x2 + 0.5 * dt * f.x2,
                            z.xi1 + 0.5 * dt * f.xi1, z.xi2 + 0.5 * dt * f.xi2};
      const double delta = std::fabs(znew.x1 - zm.x1) + std::fabs(znew.x2 - zm.x2) +
                           std::fabs(znew.xi1 - zm.xi1) + std::fabs(znew.xi2 - zm.xi2);
      zm = znew;
      if (delta < 1e-14) break;
    }
    z = PhasePoint{2.0 * zm.x1 - z.x1, 2.0 * zm.x2 - z.x2, 2.0 * zm.xi1 - z.xi1,
                   2.0 * zm.xi2 - z.xi2};
    traj.samples.push_back({static_cast<double>(i) * dt, z});
    max_drift = std::max(max_drift, std::fabs(eval_hamiltonian(sym, z) - traj.energy0));
  }
  traj.max_energy_drift = max_drift;
  if (max_drift > 1e-4) {
    throw StepTooLarge("energy drift " + std::to_string(max_drift) + " exceeds 1e-4; halve dt");
  }
  return traj;
}

namespace {

double x2_at(const Trajectory& traj, double t) {
  const double dt = traj.dt;
  const double idx = t / dt;
  const long i0 = std::clamp(static_cast<long>(std::floor(idx)), 0L,
                             static_cast<long>(traj.samples.size()) - 2);
  const double frac = idx - static_cast<double>(i0);
  const double a = traj.samples[static_cast<std::size_t>(i0)].z.x2;
  const double b = traj.samples[static_cast<std::size_t>(i0) + 1].z.x2;
  return a + frac * (b - a);
}

}  // namespace

DriftDecomposition decompose_drift(const Trajectory& traj, double T) {
  if (traj.samples.size() < 2 || T <= 0.0) throw PreconditionViolated("need samples and T > 0");
  const double span = traj.samples.back().t;
  if (span < 3.0 * T * (1.0 - 1e-12)) {
    throw SpanTooShort("trajectory spans " + std::to_string(span / T) + " periods; need >= 3");
  }
  const long N = static_cast<long>(std::floor(span / T + 1e-12));
  const double tN = static_cast<double>(N) * T;
  const double x20 = traj.samples.front().z.x2;
  DriftDecomposition d;
  d.v_est = (x2_at(traj, tN) - x20) / tN;
  double sup = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t > T) break;
    sup = std::max(sup, std::fabs(s.z.x2 - d.v_est * s.t - x20));
  }
  sup = std::max(sup, std::fabs(x2_at(traj, T) - d.v_est * T - x20));
  d.residual_sup = sup;
  return d;
}

double poincare_shift(const ModelSymbol& sym, double xi2) {
  const CriticalData crit = find_kstar(sym);
  if (std::fabs(xi2 - crit.kstar) > 0.1 + 1e-12) {
    throw PreconditionViolated("poincare_shift requires |xi2 - kstar| <= 0.1");
  }
  const WellGeometry w = turning_points(sym, xi2);
  const double T = period(sym, xi2);
  const PhasePoint z0{w.b2, 0.0, 0.0, xi2};
  const Trajectory traj = integrate_trajectory(sym, z0, T, T / 4096.0);
  return traj.samples.back().z.x2;
}

}  // namespace magspec::dynamics
