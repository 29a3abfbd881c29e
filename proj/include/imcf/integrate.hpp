#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "imcf/diagnostics.hpp"
#include "imcf/flow.hpp"
#include "imcf/state.hpp"

namespace imcf {

enum class StepMethod : std::uint8_t { Euler = 0, RK4 = 1 };

struct StepControl {
  StepMethod method = StepMethod::RK4;
  double cfl = 0.5;          // in (0, 1]
  double dt_max = 0.0;       // > 0
  double t_end = 0.0;        // > 0
  int record_every = 1;      // >= 1 (steps)
  long checkpoint_every = 0; // steps; 0 = never
};

enum class Termination : std::uint8_t {
  Completed = 0,
  PositivityLost = 1,
  Instability = 2,
  MapLeftDomainStop = 3,
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;  // rows at step % record_every == 0
  SpacelikeState final_state;
  std::optional<GaugeData> gauge;
  Termination reason = Termination::Completed;
  long steps = 0;
  double M_norm = 0.0;  // sup|A| at t = 0
};

// Patch boundary handling, applied at the RHS level for every stage: Frozen
// zeroes the boundary rows, DirichletFromOracle writes the exact time
// derivative of the reference solution there. Empty `impose` means no-op
// (Torus / Homogeneous).
struct BoundaryCondition {
  std::function<void(double t, Sym2Field& dg, Sym2Field& dh)> impose;

  static BoundaryCondition none() { return {}; }
  static BoundaryCondition frozen(const DomainSpec& dom);
};

// dt = min(dt_max, cfl dx_min^2 / (2 n lambda_max(g^-1)), cfl / (4 max|A|^2)).
// lambda_max is bounded from above by the Gershgorin row sum of g^-1 (exact
// for diagonal metrics). Throws DegenerateMetric when the bound is not finite.
double stable_dt(const SpacelikeState& st, const StepControl& ctrl);

// One explicit step of the chosen variant. `bg` is required for GaugeFixed.
SpacelikeState step(const SpacelikeState& st, FlowVariant variant, const GaugeBackground* bg,
                    double dt, StepMethod method, const BoundaryCondition& bc);

struct RunHooks {
  // Called when step % checkpoint_every == 0 (and not at step 0).
  std::function<void(const SpacelikeState&, const GaugeData*, long step)> checkpoint;
};

// Resume support: global step offset, carried |A| normalization and initial
// record suppression. The defaults describe a fresh run.
struct RunStart {
  long step0 = 0;
  double M_norm = -1.0;  // < 0: compute sup|A| from st0
  bool initial_record = true;
};

// Advances st0 to t_end, recording diagnostics every record_every steps
// (including step 0), checking positivity and finiteness each step. GaugeFixed
// runs also advance the diffeomorphism F alongside the hatted state. The run
// carries no hidden state beyond (state, t, step): restarting from a snapshot
// of those reproduces the remainder of the run bitwise.
RunResult run_flow(const SpacelikeState& st0, FlowVariant variant, const StepControl& ctrl,
                   std::optional<GaugeData> gauge0 = std::nullopt,
                   const BoundaryCondition& bc = {}, const RunHooks& hooks = {},
                   const RunStart& start = {});

}  // namespace imcf
