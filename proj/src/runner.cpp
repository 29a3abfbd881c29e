#include "imcf/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "imcf/checkpoint.hpp"
#include "imcf/timeseries.hpp"

namespace imcf {

int exit_code_for(Termination reason) {
  switch (reason) {
    case Termination::Completed: return kExitOk;
    case Termination::PositivityLost: return kExitPositivityLost;
    case Termination::Instability: return kExitInstability;
    case Termination::MapLeftDomainStop: return kExitMapLeftDomain;
  }
  return kExitFailure;
}

const char* termination_name(Termination reason) {
  switch (reason) {
    case Termination::Completed: return "completed";
    case Termination::PositivityLost: return "positivity-lost";
    case Termination::Instability: return "instability";
    case Termination::MapLeftDomainStop: return "map-left-domain";
  }
  return "unknown";
}

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double envelope_tau(const Scenario& sc, const RunResult& res) {
  double dx2 = 0.0;
  if (sc.domain.kind != DomainKind::Homogeneous) {
    double dx = sc.domain.spacing[0];
    for (double s : sc.domain.spacing) dx = std::min(dx, s);
    dx2 = dx * dx;
  }
  double dt_mean = res.steps > 0 ? res.final_state.t / static_cast<double>(res.steps) : 0.0;
  return 10.0 * (dx2 + dt_mean);
}

ExecutionReport finish_run(const Scenario& sc, RunResult res, const std::string& out_dir,
                           double wall_seconds) {
  ExecutionReport rep;
  rep.result = std::move(res);
  rep.reason = rep.result.reason;
  rep.exit_code = exit_code_for(rep.reason);
  rep.wall_seconds = wall_seconds;
  rep.output_dir = out_dir;

  fs::create_directories(out_dir);
  rep.csv_path = (fs::path(out_dir) / "timeseries.csv").string();
  emit_timeseries(rep.result.records, rep.csv_path);

  rep.final_checkpoint_path = (fs::path(out_dir) / "final.ck").string();
  Checkpoint ck;
  ck.scenario_hash = sc.content_hash;
  ck.scenario_text = sc.source_text;
  ck.t = rep.result.final_state.t;
  ck.step = static_cast<std::uint64_t>(rep.result.steps);
  ck.M_norm = rep.result.M_norm;
  ck.g = rep.result.final_state.g;
  ck.h = rep.result.final_state.h;
  if (rep.result.gauge) ck.gauge = *rep.result.gauge;
  save_checkpoint(rep.final_checkpoint_path, ck);

  json summary;
  summary["name"] = sc.name;
  summary["scenario_hash"] = hex64(sc.content_hash);
  summary["seed"] = sc.seed;
  summary["termination"] = termination_name(rep.reason);
  summary["exit_code"] = rep.exit_code;
  summary["wall_time_s"] = wall_seconds;
  summary["steps"] = rep.result.steps;
  summary["rows"] = rep.result.records.size();
  summary["M_norm"] = rep.result.M_norm;
  summary["final_t"] = rep.result.final_state.t;
  summary["csv"] = rep.csv_path;
  summary["final_checkpoint"] = rep.final_checkpoint_path;

  // envelope verdicts for H > 0 runs
  bool h_positive = !rep.result.records.empty();
  for (const auto& r : rep.result.records)
    if (!(r.H_min > 0.0) || !std::isfinite(r.H_min)) h_positive = false;
  if (h_positive) {
    const auto& first = rep.result.records.front();
    double tau = envelope_tau(sc, rep.result);
    EnvelopeReport er = envelope_check(rep.result.records, sc.domain.n, first.H_min, first.H_max,
                                       first.A2_max, tau);
    summary["envelopes"] = {{"checked", true},
                            {"tau", tau},
                            {"passed", er.passed()},
                            {"violations", er.violations.size()},
                            {"worst_upper_margin", er.worst_upper_margin}};
  } else {
    summary["envelopes"] = {{"checked", false}};
  }

  rep.summary_path = (fs::path(out_dir) / "summary.json").string();
  std::ofstream js(rep.summary_path, std::ios::binary);
  js << summary.dump(2) << '\n';
  return rep;
}

std::string resolve_out_dir(const Scenario& sc, const std::string& override_dir,
                            const char* suffix) {
  if (!override_dir.empty()) return override_dir;
  if (!sc.output_dir.empty()) return sc.output_dir + suffix;
  return (fs::path("out") / (sc.name + suffix)).string();
}

}  // namespace

ExecutionReport execute_scenario(const Scenario& sc, const std::string& output_dir_override) {
  std::string out_dir = resolve_out_dir(sc, output_dir_override, "");
  fs::create_directories(out_dir);

  SpacelikeState st0 = build_initial_state(sc);
  BoundaryCondition bc = build_boundary(sc);
  std::optional<GaugeData> gauge = build_gauge(sc, st0);

  // one |A| normalization for the whole run, shared with cadence checkpoints
  double M_norm;
  {
    Sym2Field ginv = inverse_metric(st0.g);
    ScalarField A2 = norm_A2(st0.h, ginv);
    double a2max = 0.0;
    for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
    M_norm = std::sqrt(a2max);
  }

  RunHooks hooks;
  hooks.checkpoint = [&sc, &out_dir, M_norm](const SpacelikeState& st, const GaugeData* gd,
                                             long step) {
    Checkpoint ck;
    ck.scenario_hash = sc.content_hash;
    ck.scenario_text = sc.source_text;
    ck.t = st.t;
    ck.step = static_cast<std::uint64_t>(step);
    ck.M_norm = M_norm;
    ck.g = st.g;
    ck.h = st.h;
    if (gd) ck.gauge = *gd;
    char name[32];
    std::snprintf(name, sizeof name, "checkpoint_%08ld.ck", step);
    save_checkpoint((fs::path(out_dir) / name).string(), ck);
  };

  RunStart start;
  start.M_norm = M_norm;
  auto t0 = std::chrono::steady_clock::now();
  RunResult res = run_flow(st0, sc.variant, sc.step, std::move(gauge), bc, hooks, start);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  return finish_run(sc, std::move(res), out_dir, wall);
}

ExecutionReport resume_checkpoint(const std::string& checkpoint_path,
                                  const std::string& output_dir_override) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  ScenarioParse parsed = parse_scenario(ck.scenario_text);
  if (!parsed.ok())
    throw CheckpointError("checkpoint scenario no longer validates: " + checkpoint_path);
  const Scenario& sc = *parsed.scenario;
  if (fnv1a64(ck.scenario_text) != ck.scenario_hash)
    throw CheckpointError("scenario hash mismatch in " + checkpoint_path);

  std::string out_dir = resolve_out_dir(sc, output_dir_override, "-resumed");
  fs::create_directories(out_dir);

  SpacelikeState st{ck.g, ck.h, ck.t};
  BoundaryCondition bc = build_boundary(sc);
  std::optional<GaugeData> gauge;
  if (ck.gauge) gauge = *ck.gauge;

  RunStart start;
  start.step0 = static_cast<long>(ck.step);
  start.M_norm = ck.M_norm;
  start.initial_record = false;

  RunHooks hooks;
  double M_norm = ck.M_norm;
  hooks.checkpoint = [&sc, &out_dir, M_norm](const SpacelikeState& s, const GaugeData* gd,
                                             long step) {
    Checkpoint c;
    c.scenario_hash = sc.content_hash;
    c.scenario_text = sc.source_text;
    c.t = s.t;
    c.step = static_cast<std::uint64_t>(step);
    c.M_norm = M_norm;
    c.g = s.g;
    c.h = s.h;
    if (gd) c.gauge = *gd;
    char name[32];
    std::snprintf(name, sizeof name, "checkpoint_%08ld.ck", step);
    save_checkpoint((fs::path(out_dir) / name).string(), c);
  };

  auto t0 = std::chrono::steady_clock::now();
  RunResult res = run_flow(st, sc.variant, sc.step, std::move(gauge), bc, hooks, start);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // res.steps counts executed steps; the checkpoint's global index is what
  // the final snapshot must carry for bitwise agreement with a straight run
  res.steps += static_cast<long>(ck.step);
  return finish_run(sc, std::move(res), out_dir, wall);
}

}  // namespace imcf
