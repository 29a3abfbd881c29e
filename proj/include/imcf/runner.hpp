#pragma once

#include <string>

#include "imcf/integrate.hpp"
#include "imcf/scenario.hpp"

namespace imcf {

// Process exit codes (documented in the README).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verify suite failed / generic
inline constexpr int kExitParseError = 2;
inline constexpr int kExitValidationError = 3;
inline constexpr int kExitPositivityLost = 4;
inline constexpr int kExitInstability = 5;
inline constexpr int kExitMapLeftDomain = 6;

int exit_code_for(Termination reason);
const char* termination_name(Termination reason);

struct ExecutionReport {
  int exit_code = 0;
  Termination reason = Termination::Completed;
  double wall_seconds = 0.0;
  std::string output_dir;
  std::string csv_path;
  std::string summary_path;
  std::string final_checkpoint_path;
  RunResult result;
};

// Runs a validated scenario end to end: seed construction, flow integration,
// CSV time series, JSON summary, cadence checkpoints and a final checkpoint.
ExecutionReport execute_scenario(const Scenario& sc, const std::string& output_dir_override = "");

// Continues an interrupted run from its checkpoint (scenario text embedded in
// the file). Produces the same artifact set in a fresh output directory; the
// remainder of the trajectory is bitwise identical to an uninterrupted run.
ExecutionReport resume_checkpoint(const std::string& checkpoint_path,
                                  const std::string& output_dir_override = "");

}  // namespace imcf
