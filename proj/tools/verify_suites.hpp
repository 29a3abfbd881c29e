#pragma once

#include <string>
#include <vector>

namespace imcf::verify {

struct CriterionResult {
  std::string id;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Suite names accepted by `imcf verify` and the acceptance test binary.
std::vector<std::string> all_suites();

// Runs one named suite; scratch files go under work_dir.
std::vector<CriterionResult> run_suite(const std::string& name, const std::string& work_dir);

// Runs the given suites (or all for "all"), printing one PASS/FAIL line per
// criterion; returns 0 when everything passed, 1 otherwise.
int run_and_report(const std::vector<std::string>& names, const std::string& work_dir);

}  // namespace imcf::verify
