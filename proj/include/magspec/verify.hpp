#pragma once

#include <string>
#include <vector>

namespace magspec::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string target;    // what had to hold
  std::string measured;  // what was observed
  bool pass = false;
  bool quick = true;     // member of the sub-minute subset
  double seconds = 0.0;
};

// Run the acceptance criteria (all of them, or only the quick subset) and
// return one result per criterion, ordered by id. The same registry backs
// the CLI `verify` command and the acceptance test binary.
std::vector<CriterionResult> run_criteria(bool quick_only);

}  // namespace magspec::verify
