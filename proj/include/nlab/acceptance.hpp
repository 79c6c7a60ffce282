#pragma once

// The batch acceptance suite: every headline claim of the project as one
// runnable list. Each criterion produces a single measured number compared
// against a pinned expectation and tolerance; `pass` reflects the full
// criterion (some have secondary exact sub-checks, recorded in `note`).

#include <string>
#include <vector>

namespace nlab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // secondary numbers and reported-only findings
};

// Runs all criteria in a fixed order with fixed seeds. A criterion that
// throws is recorded as failed with the message in `note`; run_all itself
// does not throw.
std::vector<CriterionResult> run_all();

std::string format_line(const CriterionResult& r);

}  // namespace nlab::acceptance
