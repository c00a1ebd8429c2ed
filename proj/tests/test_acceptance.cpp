// Acceptance gate. Runs the full criteria registry (the same one behind the
// CLI verify command) and turns every criterion into a doctest assertion,
// printing one line per criterion so a failed gate shows exactly which
// measurement missed its target. Criterion 13, the residual convergence
// rate, is a known red: see the verification section of the README.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "magspec/verify.hpp"

TEST_CASE("acceptance criteria") {
  const auto results = magspec::verify::run_criteria(false);
  REQUIRE(results.size() == 16);
  for (const auto& r : results) {
    std::printf("criterion %2d  %-22s %s  target: %s  measured: %s  (%.2fs)\n", r.id,
                r.name.c_str(), r.pass ? "PASS" : "FAIL", r.target.c_str(),
                r.measured.c_str(), r.seconds);
  }
  std::fflush(stdout);
  for (const auto& r : results) {
    CHECK_MESSAGE(r.pass, "criterion " << r.id << " (" << r.name << "): target "
                                       << r.target << ", measured " << r.measured);
  }
}
