// End-to-end tests of the command-line binary. Every fenced example in the
// README runs here with the exact documented flags, and the stated
// properties of its output are asserted. The binary path arrives from the
// build system as MAGSPEC_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using json = nlohmann::json;

const std::string& scratch_dir() {
  static const std::string dir = [] {
    auto p = std::filesystem::temp_directory_path() /
             ("magspec_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p.string();
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base = scratch_dir() + "/run" + std::to_string(counter++);
  const std::string cmd =
      std::string(MAGSPEC_CLI_PATH) + " " + args + " >" + base + ".out 2>" + base + ".err";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  return r;
}

std::string tmp_file(const std::string& name) { return scratch_dir() + "/" + name; }

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) return j;
    }
    REQUIRE_MESSAGE(false, "missing column " << name);
    return 0;
  }
  double num(std::size_t row, const std::string& name) const {
    return std::stod(rows[row][col(name)]);
  }
  std::vector<double> column(const std::string& name) const {
    std::vector<double> v;
    for (std::size_t i = 0; i < rows.size(); ++i) v.push_back(num(i, name));
    return v;
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  // The writer promises CRLF endings; a stray bare LF would break the parse
  // into a cell containing '\n' and fail the numeric reads below.
  REQUIRE(text.size() > 2);
  REQUIRE(text.substr(text.size() - 2) == "\r\n");
  Csv csv;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    const std::size_t nl = text.find("\r\n", pos);
    REQUIRE(nl != std::string::npos);
    const std::string line = text.substr(pos, nl - pos);
    REQUIRE(line.find('\n') == std::string::npos);
    if (first) {
      csv.header = split(line, ',');
      first = false;
    } else {
      csv.rows.push_back(split(line, ','));
      REQUIRE(csv.rows.back().size() == csv.header.size());
    }
    pos = nl + 2;
  }
  return csv;
}

json parse_json(const std::string& text) {
  json j = json::parse(text);
  REQUIRE(j.at("schema").get<int>() == 1);
  return j;
}

}  // namespace

TEST_CASE("kstar report carries the documented constants") {
  const RunResult r = run_cli("dynamics kstar");
  REQUIRE(r.exit_code == 0);
  const json j = parse_json(r.out);
  CHECK(j.at("kstar").get<double>() == doctest::Approx(0.6522295319699407).epsilon(1e-7));
  CHECK(j.at("kappa").get<double>() == doctest::Approx(8.078883796201052).epsilon(1e-6));
  CHECK(j.at("omega_star").get<double>() ==
        doctest::Approx(0.5 * j.at("kappa").get<double>()).epsilon(1e-12));
  CHECK(j.at("S0").get<double>() == doctest::Approx(6.189465953414456).epsilon(1e-8));
}

TEST_CASE("orbit table example: odd-parity antisymmetry on the documented grid") {
  const std::string out = tmp_file("orbits.csv");
  const RunResult r = run_cli(
      "dynamics orbit-table --nu 3 --parity odd --k-min -0.9 --k-max 0.9 --n 19 -o " + out);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.header == std::vector<std::string>{"k", "b1", "b2", "T", "I", "v"});
  REQUIRE(csv.rows.size() == 19);
  CHECK(std::stod(csv.rows[0][0]) == -0.9);  // 17-digit cells round-trip exactly
  const auto k = csv.column("k");
  const auto T = csv.column("T");
  const auto I = csv.column("I");
  const auto v = csv.column("v");
  for (std::size_t j = 0; j < 19; ++j) {
    CHECK(k[j] == doctest::Approx(-k[18 - j]).epsilon(1e-15));
    CHECK(v[j] == doctest::Approx(-v[18 - j]).epsilon(1e-8));
    CHECK(T[j] == doctest::Approx(T[18 - j]).epsilon(1e-10));
  }
  CHECK(std::fabs(I[9]) <= 1e-12);
  CHECK(std::fabs(v[9]) <= 1e-12);
}

TEST_CASE("trajectory example: energy control, closure, SVG shape") {
  const std::string out = tmp_file("traj.csv");
  REQUIRE(run_cli("dynamics trajectory --k 0.65 --periods 3 -o " + out).exit_code == 0);
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.header ==
        std::vector<std::string>{"t", "x1", "x2", "xi1", "xi2", "energy"});
  REQUIRE(csv.rows.size() > 6000);
  double emax = 0.0;
  for (double e : csv.column("energy")) emax = std::max(emax, std::fabs(e));
  CHECK(emax <= 1e-8);

  const std::size_t last = csv.rows.size() - 1;
  CHECK(std::fabs(csv.num(last, "x1") - csv.num(0, "x1")) <= 1e-6);
  CHECK(std::fabs(csv.num(last, "xi1") - csv.num(0, "xi1")) <= 1e-6);
  for (std::size_t i = 0; i <= last; ++i) CHECK(csv.num(i, "xi2") == 0.65);

  const RunResult svg = run_cli("dynamics trajectory --k 0.65 --periods 3 --svg");
  REQUIRE(svg.exit_code == 0);
  CHECK(svg.out.rfind("<svg", 0) == 0);
  CHECK(svg.out.find("</svg>") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t p = svg.out.find("<polyline"); p != std::string::npos;
       p = svg.out.find("<polyline", p + 1)) {
    ++polylines;
  }
  CHECK(polylines == 1);
}

TEST_CASE("eigenvalue pairing example stays within the documented deviation") {
  const std::string out = tmp_file("eigs.csv");
  REQUIRE(run_cli("spectrum eigs --xi2 0.65 --hbar 0.05 -o " + out).exit_code == 0);
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.header == std::vector<std::string>{"n", "lambda_fd", "lambda_bs", "delta"});
  REQUIRE(csv.rows.size() >= 5);
  const auto fd = csv.column("lambda_fd");
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    CHECK(csv.num(i, "n") == static_cast<double>(i));
    CHECK(std::fabs(csv.num(i, "delta")) <= 1e-3);
    CHECK(csv.num(i, "delta") ==
          doctest::Approx(csv.num(i, "lambda_bs") - fd[i]).epsilon(1e-12));
    if (i > 0) CHECK(fd[i] > fd[i - 1]);
  }
}

TEST_CASE("counting report examples: inside and outside the well") {
  const RunResult inside = run_cli("spectrum n0 --xi2 0 --hbar 0.1");
  REQUIRE(inside.exit_code == 0);
  const json ji = parse_json(inside.out);
  CHECK(ji.at("n0").get<long>() == 8);
  const double weyl = ji.at("n0_weyl").get<double>();
  const double S = ji.at("S").get<double>();
  CHECK(weyl == doctest::Approx(7.868937326773974).epsilon(1e-9));
  CHECK(weyl == doctest::Approx(S / (2.0 * M_PI * 0.1)).epsilon(1e-12));

  const RunResult outside = run_cli("spectrum n0 --xi2 -2 --hbar 0.3");
  REQUIRE(outside.exit_code == 0);
  const json jo = parse_json(outside.out);
  CHECK(jo.at("n0").get<long>() == 0);
  CHECK(jo.at("n0_weyl").get<double>() == 0.0);
  CHECK(jo.at("S").get<double>() == 0.0);
}

TEST_CASE("curves example: branch 4 is convex across the documented grid") {
  const std::string out = tmp_file("curves.csv");
  REQUIRE(run_cli("spectrum curves --xi2-min 0.25 --xi2-max 1.05 --n 17 --hbar 0.2 "
                  "--levels 4 -o " +
                  out)
              .exit_code == 0);
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.header ==
        std::vector<std::string>{"level", "xi2", "lambda", "dlambda", "d2lambda"});
  REQUIRE(csv.rows.size() == 17);
  double lam_lo = 1.0, lam_hi = -1.0, d2_min = 1e9;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    CHECK(csv.num(i, "level") == 4.0);
    lam_lo = std::min(lam_lo, csv.num(i, "lambda"));
    lam_hi = std::max(lam_hi, csv.num(i, "lambda"));
    d2_min = std::min(d2_min, csv.num(i, "d2lambda"));
  }
  CHECK(lam_lo < 0.0);  // the branch crosses zero inside the grid
  CHECK(lam_hi > 0.0);
  CHECK(d2_min > 0.0);
}

TEST_CASE("gap report examples: spacing exponent and the flat-spot scan") {
  const RunResult tower = run_cli("spectrum gaps --hbar-list 0.2,0.1,0.05,0.025");
  REQUIRE(tower.exit_code == 0);
  const json jt = parse_json(tower.out);
  CHECK(std::fabs(jt.at("exponent").get<double>() - 4.0 / 3.0) <= 0.15);
  REQUIRE(jt.at("hbars").size() == 4);
  REQUIRE(jt.at("min_spacing").size() == 4);
  const double lo = jt.at("ratio_lo").get<double>();
  const double hi = jt.at("ratio_hi").get<double>();
  CHECK(lo > 0.0);
  CHECK(hi >= lo);
  CHECK(hi <= 10.0 * lo);
  CHECK(jt.at("kstar_hbar").is_null());

  const RunResult scan =
      run_cli("spectrum gaps --w 1 --xi2-lo 0.45 --xi2-hi 0.85 --hbar-list 0.1");
  REQUIRE(scan.exit_code == 0);
  const json js = parse_json(scan.out);
  CHECK(std::fabs(js.at("kstar_hbar").get<double>() - 0.6522295319699407) <= 0.1);
}

TEST_CASE("correction example: documented value and internal identity") {
  const RunResult r = run_cli("asympt correction --hbar 0.075");
  REQUIRE(r.exit_code == 0);
  const json j = parse_json(r.out);
  const double exact = j.at("corr_exact").get<double>();
  CHECK(exact == doctest::Approx(0.158663).epsilon(2e-4));
  CHECK(std::fabs(exact - (j.at("n0_integral").get<double>() -
                           j.at("emw0_integral").get<double>())) <= 1e-9);
  CHECK(j.at("corr_leading").get<double>() == doctest::Approx(exact).epsilon(0.10));
  CHECK(j.at("kstar").get<double>() == doctest::Approx(0.6522295319699407).epsilon(1e-7));
  CHECK(j.at("S0").get<double>() == doctest::Approx(6.189465953414456).epsilon(1e-8));
  CHECK(j.at("hbar").get<double>() == 0.075);
  CHECK(j.at("h").get<double>() == doctest::Approx(0.0075).epsilon(1e-15));
}

TEST_CASE("sawtooth table example: frozen samples, sample mean, antiderivative closure") {
  const std::string out = tmp_file("gfun.csv");
  REQUIRE(run_cli("asympt gfun --n 201 -o " + out).exit_code == 0);
  const Csv csv = parse_csv(slurp(out));
  CHECK(csv.header == std::vector<std::string>{"t", "G", "G1"});
  REQUIRE(csv.rows.size() == 201);
  CHECK(csv.num(0, "t") == 0.0);
  CHECK(csv.num(200, "t") == 1.0);
  CHECK(std::fabs(csv.num(0, "G") - 0.172218587632) <= 1e-8);
  CHECK(std::fabs(csv.num(50, "G") - 0.255469926649) <= 1e-8);    // t = 0.25
  CHECK(std::fabs(csv.num(100, "G") + 0.587991037587) <= 1e-8);   // t = 0.5
  CHECK(csv.num(0, "G1") == doctest::Approx(-0.031065223).epsilon(1e-5));
  double mean = 0.0;
  for (double g : csv.column("G")) mean += g;
  mean /= 201.0;
  CHECK(std::fabs(mean) <= 1e-3);  // raw sample mean of a cusped function: ~2e-4 at n=201
  CHECK(std::fabs(csv.num(200, "G1") - csv.num(0, "G1")) <= 1e-9);
}

TEST_CASE("scaling table example: documented ladder values") {
  const std::string out = tmp_file("scaling.csv");
  REQUIRE(run_cli("asympt scaling --hbar-list 0.1,0.05,0.025 -o " + out).exit_code == 0);
  const Csv csv = parse_csv(slurp(out));
  REQUIRE(csv.rows.size() == 3);
  const double want_corr[3] = {1.147304, 1.439212, -3.511937};
  const double want_hbar[3] = {0.1, 0.05, 0.025};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(csv.num(i, "hbar") == want_hbar[i]);
    CHECK(csv.num(i, "corr_exact") == doctest::Approx(want_corr[i]).epsilon(2e-5));
    CHECK(csv.num(i, "residual") ==
          doctest::Approx(csv.num(i, "corr_exact") - csv.num(i, "corr_leading"))
              .epsilon(1e-12));
  }
  const auto nc = csv.column("norm_corr");
  const auto [lo, hi] = std::minmax_element(nc.begin(), nc.end());
  CHECK(*hi <= 2.0 * *lo);
}

TEST_CASE("counting density example: documented value") {
  const RunResult r = run_cli("asympt counting --hbar 0.3 --w-sin 0.3");
  REQUIRE(r.exit_code == 0);
  const json j = parse_json(r.out);
  CHECK(j.at("density").get<double>() == doctest::Approx(32.674910645).epsilon(1e-6));
  CHECK(j.at("w0").get<double>() == 1.0);
  CHECK(j.at("w_sin").get<double>() == 0.3);
}

TEST_CASE("verify --quick example: all executed criteria pass") {
  const RunResult r = run_cli("verify --quick");
  REQUIRE(r.exit_code == 0);
  const json j = parse_json(r.out);
  CHECK(j.at("quick").get<bool>() == true);
  CHECK(j.at("pass").get<bool>() == true);
  const auto& list = j.at("criteria");
  REQUIRE(list.size() == 14);  // the full registry minus the two scaling criteria
  std::vector<int> ids;
  for (const auto& c : list) {
    ids.push_back(c.at("id").get<int>());
    CHECK(c.at("pass").get<bool>() == true);
    CHECK(!c.at("criterion").get<std::string>().empty());
    CHECK(!c.at("target").get<std::string>().empty());
    CHECK(!c.at("measured").get<std::string>().empty());
  }
  CHECK(ids == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 14, 15, 16});
}

TEST_CASE("identical flags produce byte-identical output") {
  const RunResult a = run_cli("dynamics kstar");
  const RunResult b = run_cli("dynamics kstar");
  CHECK(a.out == b.out);

  const std::string f1 = tmp_file("det1.csv");
  const std::string f2 = tmp_file("det2.csv");
  REQUIRE(run_cli("spectrum eigs --xi2 0.65 --hbar 0.05 -o " + f1).exit_code == 0);
  REQUIRE(run_cli("spectrum eigs --xi2 0.65 --hbar 0.05 -o " + f2).exit_code == 0);
  CHECK(slurp(f1) == slurp(f2));

  const RunResult g1 = run_cli("asympt gfun --n 41");
  const RunResult g2 = run_cli("asympt gfun --n 41");
  CHECK(g1.out == g2.out);
}

TEST_CASE("exit codes: usage errors and machine-readable domain errors") {
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("spectrum").exit_code == 2);  // missing subcommand
  const RunResult bad_nu = run_cli("dynamics orbit-table --nu 1");
  CHECK(bad_nu.exit_code == 2);
  CHECK(!bad_nu.err.empty());

  const RunResult window = run_cli("spectrum eigs --lo 0.3 --hi 0.1");
  CHECK(window.exit_code == 3);
  const json jw = json::parse(window.err);
  CHECK(jw.at("schema").get<int>() == 1);
  CHECK(jw.at("error").at("code").get<std::string>() == "precondition_violated");
  CHECK(!jw.at("error").at("message").get<std::string>().empty());

  const RunResult coarse =
      run_cli("dynamics trajectory --k 0.65 --periods 1 --steps-per-period 50");
  CHECK(coarse.exit_code == 3);
  CHECK(json::parse(coarse.err).at("error").at("code").get<std::string>() ==
        "step_too_large");

  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("spectrum gaps --xi2-lo 0.5").exit_code == 2);  // range flags are a pair
}
