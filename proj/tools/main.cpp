#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "imcf/oracles.hpp"
#include "imcf/runner.hpp"
#include "imcf/scenario.hpp"
#include "verify_suites.hpp"

namespace {

using namespace imcf;

void print_issues(const std::string& path, const ScenarioParse& r) {
  for (const auto& i : r.issues) {
    if (i.line > 0)
      std::fprintf(stderr, "%s:%d: parse error: %s\n", path.c_str(), i.line, i.message.c_str());
    else
      std::fprintf(stderr, "%s: invalid %s: %s\n", path.c_str(), i.field.c_str(),
                   i.message.c_str());
  }
}

// Parse errors (bad syntax) map to exit 2, validation problems to exit 3.
int issue_exit_code(const ScenarioParse& r) {
  for (const auto& i : r.issues)
    if (i.line > 0) return kExitParseError;
  return kExitValidationError;
}

int run_one(const std::string& path, const std::string& out_dir) {
  ScenarioParse parsed = parse_scenario_file(path);
  if (!parsed.ok()) {
    print_issues(path, parsed);
    return issue_exit_code(parsed);
  }
  try {
    ExecutionReport rep = execute_scenario(*parsed.scenario, out_dir);
    std::printf("%s: %s after %ld steps (t = %g), wall %.2fs -> %s\n", parsed.scenario->name.c_str(),
                termination_name(rep.reason), rep.result.steps, rep.result.final_state.t,
                rep.wall_seconds, rep.output_dir.c_str());
    return rep.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  // pin the curvature sign conventions before touching any scenario
  for (int n = 2; n <= 4; ++n)
    if (convention_self_test(n) > 1e-10) {
      std::fprintf(stderr, "curvature convention self-test failed for n=%d\n", n);
      return kExitFailure;
    }

  CLI::App app{"intrinsic mean curvature flow laboratory"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_files;
  std::string out_dir;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run scenario file(s)");
  run->add_option("scenarios", scenario_files, "scenario file(s)")->required();
  run->add_option("--output-dir", out_dir, "output directory (single scenario only)");
  run->add_option("--jobs", jobs, "run up to N scenarios in parallel")->default_val(1);

  std::string ckpt_path, resume_out;
  auto* resume = app.add_subcommand("resume", "continue a run from a checkpoint");
  resume->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
  resume->add_option("--output-dir", resume_out, "output directory");

  std::vector<std::string> suites;
  std::string verify_dir = "verify-out";
  auto* verify = app.add_subcommand("verify", "run acceptance suites");
  verify->add_option("suites", suites, "suite names or 'all'")->required();
  verify->add_option("--output-dir", verify_dir, "scratch directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (scenario_files.size() == 1) return run_one(scenario_files[0], out_dir);
    if (!out_dir.empty()) {
      std::fprintf(stderr, "--output-dir applies to single-scenario runs only\n");
      return kExitFailure;
    }
    // batch mode: independent scenarios, isolated output directories
    std::mutex mtx;
    std::size_t next = 0;
    int worst = 0;
    auto worker = [&]() {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(mtx);
          if (next >= scenario_files.size()) return;
          i = next++;
        }
        int code = run_one(scenario_files[i], "");
        std::lock_guard<std::mutex> lk(mtx);
        worst = std::max(worst, code);
      }
    };
    std::vector<std::thread> pool;
    int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(scenario_files.size())));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return worst;
  }

  if (resume->parsed()) {
    try {
      ExecutionReport rep = resume_checkpoint(ckpt_path, resume_out);
      std::printf("resumed: %s at t = %g after %ld total steps -> %s\n",
                  termination_name(rep.reason), rep.result.final_state.t, rep.result.steps,
                  rep.output_dir.c_str());
      return rep.exit_code;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "resume failed: %s\n", e.what());
      return kExitFailure;
    }
  }

  std::filesystem::create_directories(verify_dir);
  return imcf::verify::run_and_report(suites, verify_dir);
}
