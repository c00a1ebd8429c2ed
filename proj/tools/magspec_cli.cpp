// Command-line surface. Every command is a thin wrapper over one library
// call plus deterministic serialization: CSV per RFC 4180 with 17-digit
// floats, JSON with a schema marker, SVG as a single autoscaled polyline.
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 domain error
// (with a machine-readable JSON object on stderr).
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "magspec/asymptotics.hpp"
#include "magspec/dynamics.hpp"
#include "magspec/errors.hpp"
#include "magspec/io.hpp"
#include "magspec/quadrature.hpp"
#include "magspec/spectrum1d.hpp"
#include "magspec/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace magspec;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("io", "cannot open output file: " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Flags shared by every command that names a model.
struct ModelFlags {
  int nu = 2;
  std::string parity = "even";

  void attach(CLI::App* cmd) {
    cmd->add_option("--nu", nu, "degeneration order, at least 2")
        ->check(CLI::Range(2, 16))
        ->capture_default_str();
    cmd->add_option("--parity", parity, "model parity")
        ->check(CLI::IsMember({"even", "odd"}))
        ->capture_default_str();
  }
  Parity par() const { return parity == "odd" ? Parity::Odd : Parity::Even; }
  ModelSymbol symbol() const { return ModelSymbol{nu, par(), 1.0}; }
};

spectrum1d::ReducedSymbol reduced(const ModelFlags& m, double xi2, double hbar, double W) {
  return spectrum1d::ReducedSymbol{m.symbol(), xi2, hbar, W};
}

void cmd_orbit_table(const ModelFlags& m, double k_min, double k_max, int n,
                     const std::string& out) {
  io::CsvTable csv({"k", "b1", "b2", "T", "I", "v"});
  for (int j = 0; j < n; ++j) {
    const double k = n == 1 ? k_min : k_min + (k_max - k_min) * j / (n - 1);
    const OrbitData d = dynamics::orbit_data(m.symbol(), k);
    csv.add_row(std::vector<double>{d.k, d.b1, d.b2, d.T, d.I, d.v});
  }
  emit(csv.str(), out);
}

void cmd_kstar(const ModelFlags& m, const std::string& out) {
  const CriticalData c = dynamics::find_kstar(m.symbol());
  emit(dump(json{{"schema", 1},
                 {"kstar", c.kstar},
                 {"kappa", c.kappa},
                 {"omega_star", c.omega_star},
                 {"S0", c.S0}}),
       out);
}

void cmd_trajectory(const ModelFlags& m, double k, double periods, int steps, bool svg,
                    const std::string& out) {
  const ModelSymbol sym = m.symbol();
  const double T = dynamics::period(sym, k);
  const PhasePoint start{dynamics::turning_points(sym, k).b2, 0.0, 0.0, k};
  const Trajectory traj =
      dynamics::integrate_trajectory(sym, start, periods * T, T / steps);
  if (svg) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(traj.samples.size());
    for (const auto& s : traj.samples) pts.emplace_back(s.z.x1, s.z.x2);
    emit(io::svg_polyline(pts), out);
    return;
  }
  io::CsvTable csv({"t", "x1", "x2", "xi1", "xi2", "energy"});
  for (const auto& s : traj.samples) {
    csv.add_row(std::vector<double>{s.t, s.z.x1, s.z.x2, s.z.xi1, s.z.xi2,
                                    dynamics::eval_hamiltonian(sym, s.z)});
  }
  emit(csv.str(), out);
}

void cmd_eigs(const ModelFlags& m, double xi2, double hbar, double W, double lo, double hi,
              const std::string& out) {
  const spectrum1d::ReducedSymbol s = reduced(m, xi2, hbar, W);
  const std::vector<double> fd =
      spectrum1d::eigenvalues_in(spectrum1d::build_operator(s, 0.5), lo, hi).values;
  const std::vector<double> bs = spectrum1d::bohr_sommerfeld(s, lo, hi).values;
  io::CsvTable csv({"n", "lambda_fd", "lambda_bs", "delta"});
  for (std::size_t i = 0; i < fd.size(); ++i) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double b : bs) {
      if (!(std::fabs(b - fd[i]) >= std::fabs(best - fd[i]))) best = b;
    }
    csv.add_row({io::fmt17(static_cast<double>(i)), io::fmt17(fd[i]), io::fmt17(best),
                 io::fmt17(best - fd[i])});
  }
  emit(csv.str(), out);
}

void cmd_n0(const ModelFlags& m, double xi2, double hbar, double W, const std::string& out) {
  const spectrum1d::CountingResult r = spectrum1d::n0(reduced(m, xi2, hbar, W));
  emit(dump(json{{"schema", 1}, {"n0", r.n0}, {"n0_weyl", r.n0_weyl}, {"S", r.S}}), out);
}

void cmd_curves(const ModelFlags& m, double xi2_min, double xi2_max, int n, double hbar,
                double W, std::vector<long> levels, const std::string& out) {
  std::vector<double> grid;
  for (int j = 0; j < n; ++j) {
    grid.push_back(n == 1 ? xi2_min : xi2_min + (xi2_max - xi2_min) * j / (n - 1));
  }
  const double mid = 0.5 * (xi2_min + xi2_max);
  const spectrum1d::ReducedSymbol base = reduced(m, mid, hbar, W);
  if (levels.empty()) {  // default: the branches crossing |lambda| < 0.1 mid-grid
    const spectrum1d::ReducedOperator op = spectrum1d::build_operator(base, 0.5);
    for (long j = spectrum1d::count_below(op, -0.1); j < spectrum1d::count_below(op, 0.1);
         ++j) {
      levels.push_back(j);
    }
  }
  io::CsvTable csv({"level", "xi2", "lambda", "dlambda", "d2lambda"});
  for (long j : levels) {
    for (const auto& pt : spectrum1d::lambda_curve(base, grid, j)) {
      csv.add_row({io::fmt17(static_cast<double>(j)), io::fmt17(pt.xi2),
                   io::fmt17(pt.lambda), io::fmt17(pt.dlambda), io::fmt17(pt.d2lambda)});
    }
  }
  emit(csv.str(), out);
}

void cmd_gaps(const ModelFlags& m, double xi2, double xi2_lo, double xi2_hi, double W,
              const std::vector<double>& hbars, const std::string& out) {
  const spectrum1d::ReducedSymbol base = reduced(m, xi2, hbars.front(), W);
  const spectrum1d::GapReport rep = spectrum1d::gap_stats(base, xi2_lo, xi2_hi, hbars);
  emit(dump(json{{"schema", 1},
                 {"hbars", rep.hbars},
                 {"min_spacing", rep.min_spacing},
                 {"exponent", rep.exponent},
                 {"ratio_lo", rep.ratio_lo},
                 {"ratio_hi", rep.ratio_hi},
                 {"kstar_hbar", rep.kstar_hbar}}),
       out);
}

void cmd_correction(const ModelFlags& m, double hbar, double gamma_bar, double W,
                    const std::string& out) {
  const auto fp = asymptotics::FieldParams::from_hbar_gamma(m.nu, m.par(), hbar, gamma_bar);
  const asymptotics::CorrectionReport r = asymptotics::corr_exact(fp, W);
  emit(dump(json{{"schema", 1},
                 {"hbar", r.hbar},
                 {"h", r.h},
                 {"emw0_integral", r.emw0_integral},
                 {"n0_integral", r.n0_integral},
                 {"corr_exact", r.corr_exact},
                 {"corr_leading", r.corr_leading},
                 {"corr_leading_refined", r.corr_leading_refined},
                 {"kstar", r.kstar},
                 {"kappa", r.kappa},
                 {"S0", r.S0}}),
       out);
}

void cmd_gfun(int n, double t_min, double t_max, const std::string& out) {
  if (n < 2) throw PreconditionViolated("gfun: need at least 2 grid points");
  // The G1 column accumulates integrals of G segment by segment instead of
  // integrating from 0 once per point; the anchor is one direct evaluation.
  io::CsvTable csv({"t", "G", "G1"});
  double g1 = asymptotics::sawtooth_G1(t_min);
  double prev = t_min;
  for (int j = 0; j < n; ++j) {
    const double t = t_min + (t_max - t_min) * j / (n - 1);
    g1 += adaptive_simpson([](double s) { return asymptotics::sawtooth_G(s); }, prev, t,
                           1e-12);
    csv.add_row(std::vector<double>{t, asymptotics::sawtooth_G(t), g1});
    prev = t;
  }
  emit(csv.str(), out);
}

void cmd_scaling(const ModelFlags& m, const std::vector<double>& hbars, double gamma_bar,
                 const std::string& out) {
  const auto rows = asymptotics::scaling_experiment(m.nu, m.par(), hbars, gamma_bar);
  io::CsvTable csv({"hbar", "mu", "h", "n0_integral", "emw0_integral", "corr_exact",
                    "corr_leading", "residual", "norm_corr", "norm_residual"});
  for (const auto& r : rows) {
    csv.add_row(std::vector<double>{r.hbar, r.mu, r.h, r.n0_integral, r.emw0_integral,
                                    r.corr_exact, r.corr_leading, r.residual, r.norm_corr,
                                    r.norm_residual});
  }
  emit(csv.str(), out);
}

void cmd_counting(const ModelFlags& m, double hbar, double gamma_bar, double w0,
                  double w_sin, double half_width, const std::string& out) {
  const auto fp = asymptotics::FieldParams::from_hbar_gamma(m.nu, m.par(), hbar, gamma_bar);
  asymptotics::PotentialProfile prof;
  prof.W = [w0, w_sin](double x2) { return w0 + w_sin * std::sin(x2); };
  const double s = half_width;
  prof.psi = [s](double x) {
    const double u = x / s;
    return std::fabs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
  };
  prof.support_lo = -s;
  prof.support_hi = s;
  const double density = asymptotics::counting_density(fp, prof);
  emit(dump(json{{"schema", 1},
                 {"hbar", fp.hbar},
                 {"h", fp.h},
                 {"w0", w0},
                 {"w_sin", w_sin},
                 {"half_width", s},
                 {"density", density}}),
       out);
}

int cmd_verify(bool quick, const std::string& out) {
  const auto results = verify::run_criteria(quick);
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    list.push_back(json{{"id", r.id},
                        {"criterion", r.name},
                        {"target", r.target},
                        {"measured", r.measured},
                        {"pass", r.pass}});
  }
  emit(dump(json{{"schema", 1}, {"quick", quick}, {"pass", all}, {"criteria", list}}), out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pilot-model spectral asymptotics for a degenerating magnetic field"};
  app.require_subcommand(1);
  int exit_code = 0;

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "classical orbits of the pilot symbol");
  dyn->require_subcommand(1);

  ModelFlags ot_m;
  double ot_kmin = -0.9, ot_kmax = 0.9;
  int ot_n = 19;
  std::string ot_out;
  auto* ot = dyn->add_subcommand("orbit-table", "turning points, period, drift over a k grid");
  ot_m.attach(ot);
  ot->add_option("--k-min", ot_kmin)->capture_default_str();
  ot->add_option("--k-max", ot_kmax)->capture_default_str();
  ot->add_option("--n", ot_n, "grid points")->capture_default_str();
  ot->add_option("-o,--output", ot_out, "output file (stdout when absent)");
  ot->callback([&] { cmd_orbit_table(ot_m, ot_kmin, ot_kmax, ot_n, ot_out); });

  ModelFlags ks_m;
  std::string ks_out;
  auto* ks = dyn->add_subcommand("kstar", "critical momentum and derived constants");
  ks_m.attach(ks);
  ks->add_option("-o,--output", ks_out, "output file (stdout when absent)");
  ks->callback([&] { cmd_kstar(ks_m, ks_out); });

  ModelFlags tr_m;
  double tr_k = 0.65, tr_periods = 3.0;
  int tr_steps = 2000;
  bool tr_svg = false;
  std::string tr_out;
  auto* tr = dyn->add_subcommand("trajectory", "integrate one orbit from its outer turning point");
  tr_m.attach(tr);
  tr->add_option("--k", tr_k, "conserved momentum xi2")->capture_default_str();
  tr->add_option("--periods", tr_periods)->capture_default_str();
  tr->add_option("--steps-per-period", tr_steps)->capture_default_str();
  tr->add_flag("--svg", tr_svg, "emit an SVG of the (x1, x2) curve instead of CSV");
  tr->add_option("-o,--output", tr_out, "output file (stdout when absent)");
  tr->callback([&] { cmd_trajectory(tr_m, tr_k, tr_periods, tr_steps, tr_svg, tr_out); });

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "reduced 1D operator spectra");
  spec->require_subcommand(1);

  ModelFlags eg_m;
  double eg_xi2 = 0.65, eg_hbar = 0.05, eg_w = 1.0, eg_lo = -0.2, eg_hi = 0.2;
  std::string eg_out;
  auto* eg = spec->add_subcommand("eigs", "FD eigenvalues and Bohr-Sommerfeld levels in a window");
  eg_m.attach(eg);
  eg->add_option("--xi2", eg_xi2)->capture_default_str();
  eg->add_option("--hbar", eg_hbar)->capture_default_str();
  eg->add_option("--w", eg_w, "potential window W")->capture_default_str();
  eg->add_option("--lo", eg_lo)->capture_default_str();
  eg->add_option("--hi", eg_hi)->capture_default_str();
  eg->add_option("-o,--output", eg_out, "output file (stdout when absent)");
  eg->callback([&] { cmd_eigs(eg_m, eg_xi2, eg_hbar, eg_w, eg_lo, eg_hi, eg_out); });

  ModelFlags n0_m;
  double n0_xi2 = 0.0, n0_hbar = 0.1, n0_w = 1.0;
  std::string n0_out;
  auto* n0c = spec->add_subcommand("n0", "negative-eigenvalue count and Weyl area");
  n0_m.attach(n0c);
  n0c->add_option("--xi2", n0_xi2)->capture_default_str();
  n0c->add_option("--hbar", n0_hbar)->capture_default_str();
  n0c->add_option("--w", n0_w, "potential window W")->capture_default_str();
  n0c->add_option("-o,--output", n0_out, "output file (stdout when absent)");
  n0c->callback([&] { cmd_n0(n0_m, n0_xi2, n0_hbar, n0_w, n0_out); });

  ModelFlags cv_m;
  double cv_min = 0.25, cv_max = 1.05, cv_hbar = 0.2, cv_w = 1.0;
  int cv_n = 17;
  std::vector<long> cv_levels;
  std::string cv_out;
  auto* cv = spec->add_subcommand("curves", "eigenvalue branches over a xi2 grid");
  cv_m.attach(cv);
  cv->add_option("--xi2-min", cv_min)->capture_default_str();
  cv->add_option("--xi2-max", cv_max)->capture_default_str();
  cv->add_option("--n", cv_n, "grid points")->capture_default_str();
  cv->add_option("--hbar", cv_hbar)->capture_default_str();
  cv->add_option("--w", cv_w, "potential window W")->capture_default_str();
  cv->add_option("--levels", cv_levels,
                 "branch indices (default: branches with |lambda| < 0.1 mid-grid)")
      ->delimiter(',');
  cv->add_option("-o,--output", cv_out, "output file (stdout when absent)");
  cv->callback([&] {
    cmd_curves(cv_m, cv_min, cv_max, cv_n, cv_hbar, cv_w, cv_levels, cv_out);
  });

  ModelFlags gp_m;
  double gp_xi2 = 0.0, gp_w = 0.0;
  std::vector<double> gp_hbars{0.2, 0.1, 0.05, 0.025};
  double gp_lo = 0.0, gp_hi = 0.0;
  bool gp_range = false;
  std::string gp_out;
  auto* gp = spec->add_subcommand("gaps", "minimal spacings, gap exponent, large-z band");
  gp_m.attach(gp);
  gp->add_option("--xi2", gp_xi2)->capture_default_str();
  gp->add_option("--w", gp_w, "potential window W (touching bottom by default)")
      ->capture_default_str();
  gp->add_option("--hbar-list", gp_hbars)->delimiter(',')->capture_default_str();
  auto* gp_lo_opt = gp->add_option("--xi2-lo", gp_lo, "flat-spot scan range");
  auto* gp_hi_opt = gp->add_option("--xi2-hi", gp_hi, "flat-spot scan range");
  gp_lo_opt->needs(gp_hi_opt);
  gp_hi_opt->needs(gp_lo_opt);
  gp->add_option("-o,--output", gp_out, "output file (stdout when absent)");
  gp->callback([&] {
    gp_range = gp->count("--xi2-lo") > 0;
    cmd_gaps(gp_m, gp_xi2, gp_range ? gp_lo : gp_xi2, gp_range ? gp_hi : gp_xi2, gp_w,
             gp_hbars, gp_out);
  });

  // asymptotics
  auto* asym = app.add_subcommand("asympt", "counting corrections and the sawtooth term");
  asym->require_subcommand(1);

  ModelFlags co_m;
  double co_hbar = 0.1, co_gamma = 0.1, co_w = 1.0;
  std::string co_out;
  auto* co = asym->add_subcommand("correction", "exact vs leading correction at one hbar");
  co_m.attach(co);
  co->add_option("--hbar", co_hbar)->capture_default_str();
  co->add_option("--gamma-bar", co_gamma)->capture_default_str();
  co->add_option("--w", co_w, "potential window W")->capture_default_str();
  co->add_option("-o,--output", co_out, "output file (stdout when absent)");
  co->callback([&] { cmd_correction(co_m, co_hbar, co_gamma, co_w, co_out); });

  int gf_n = 201;
  double gf_tmin = 0.0, gf_tmax = 1.0;
  std::string gf_out;
  auto* gf = asym->add_subcommand("gfun", "sawtooth G and its antiderivative G1 on a grid");
  gf->add_option("--n", gf_n, "grid points")->capture_default_str();
  gf->add_option("--t-min", gf_tmin)->capture_default_str();
  gf->add_option("--t-max", gf_tmax)->capture_default_str();
  gf->add_option("-o,--output", gf_out, "output file (stdout when absent)");
  gf->callback([&] { cmd_gfun(gf_n, gf_tmin, gf_tmax, gf_out); });

  ModelFlags sc_m;
  std::vector<double> sc_hbars{0.1, 0.05, 0.025};
  double sc_gamma = 0.1;
  std::string sc_out;
  auto* sc = asym->add_subcommand("scaling", "correction decomposition across hbar");
  sc_m.attach(sc);
  sc->add_option("--hbar-list", sc_hbars)->delimiter(',')->capture_default_str();
  sc->add_option("--gamma-bar", sc_gamma)->capture_default_str();
  sc->add_option("-o,--output", sc_out, "output file (stdout when absent)");
  sc->callback([&] { cmd_scaling(sc_m, sc_hbars, sc_gamma, sc_out); });

  ModelFlags ct_m;
  double ct_hbar = 0.3, ct_gamma = 0.1, ct_w0 = 1.0, ct_wsin = 0.0, ct_half = 1.0;
  std::string ct_out;
  auto* ct = asym->add_subcommand("counting", "weighted level-count density over a strip");
  ct_m.attach(ct);
  ct->add_option("--hbar", ct_hbar)->capture_default_str();
  ct->add_option("--gamma-bar", ct_gamma)->capture_default_str();
  ct->add_option("--w0", ct_w0, "constant part of W(x2)")->capture_default_str();
  ct->add_option("--w-sin", ct_wsin, "sin(x2) part of W(x2)")->capture_default_str();
  ct->add_option("--half-width", ct_half, "support half-width of the bump weight")
      ->capture_default_str();
  ct->add_option("-o,--output", ct_out, "output file (stdout when absent)");
  ct->callback([&] {
    cmd_counting(ct_m, ct_hbar, ct_gamma, ct_w0, ct_wsin, ct_half, ct_out);
  });

  // verify
  bool vf_quick = false;
  std::string vf_out;
  auto* vf = app.add_subcommand("verify", "run the acceptance criteria and report");
  vf->add_flag("--quick", vf_quick, "skip the slow scaling criteria (12, 13)");
  vf->add_option("-o,--output", vf_out, "output file (stdout when absent)");
  vf->callback([&] { exit_code = cmd_verify(vf_quick, vf_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DomainError& e) {
    const json err{{"schema", 1},
                   {"error", json{{"code", e.code()}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  }
  return exit_code;
}
