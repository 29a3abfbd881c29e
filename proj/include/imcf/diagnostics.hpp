#pragma once

#include <string>
#include <vector>

#include "imcf/flow.hpp"
#include "imcf/state.hpp"

namespace imcf {

// Gauss tensor G_ijkl = R_ijkl - (h_il h_jk - h_ik h_jl) and Codazzi tensor
// C_ijk = nabla_i h_jk - nabla_j h_ik with their pointwise squared-norm
// extremes. On Patch domains the norms exclude the 2-cell boundary shell
// where one-sided stencils dominate the error constants.
struct ConstraintResidual {
  Riem4Field G;
  CodazziField C;
  double linfG2 = 0.0, linfC2 = 0.0;  // max over (interior) points of |G|^2, |C|^2
  double l2G2 = 0.0, l2C2 = 0.0;      // grid-mean of the same
};

Riem4Field gauss_residual(const SpacelikeState& st);
CodazziField codazzi_residual(const SpacelikeState& st);
ConstraintResidual residual_norms(const SpacelikeState& st);

// Generalized eigenvalue extremes of h against H g over all points. Requires
// H > 0 everywhere, else NonpositiveH.
std::pair<double, double> pinching_ratios(const SpacelikeState& st);

// F_n = int H^n dmu, D1 = n(n-1) int (|grad H|^2/H^2) H^n dmu,
// D2 = n int |h - (H/n) g|^2 H^n dmu. Patch integrals must be explicitly
// allowed (boundary-open) or ClosedIntegralOnPatch propagates.
struct MonotonicityReport {
  double F_n = 0.0, D1 = 0.0, D2 = 0.0;
};
MonotonicityReport monotonicity_report(const SpacelikeState& st, bool allow_open_patch = false);

// One row of the canonical time series. Column order is frozen; see
// kCsvHeader in timeseries.hpp.
struct DiagnosticsRecord {
  double t = 0.0;
  double H_min = 0.0, H_max = 0.0;
  double A2_min = 0.0, A2_max = 0.0;
  double pinch_eps = 0.0, pinch_beta = 0.0;  // NaN when H <= 0 somewhere
  double F_n = 0.0, D1 = 0.0, D2 = 0.0;      // NaN when H below guard
  double normG2 = 0.0, normC2 = 0.0;
  double sec_min = 0.0, sec_max = 0.0;
  double vol = 0.0;
  double s1 = 0.0, s2 = 0.0;  // sup|grad^m A| t^{m/2} / M, m = 1, 2
  // extras carried for monitors, not part of the CSV row
  double sup_grad_A = 0.0, sup_grad2_A = 0.0;
};

// Full per-time diagnostic evaluation. M_norm is the run's |A| normalization
// (sup|A| at t = 0); pass 0 to suppress the s1/s2 scaling.
DiagnosticsRecord make_record(const SpacelikeState& st, double M_norm);

// Envelope verification against the maximum-principle bounds
//   1/sqrt(2t + 1/H_min(0)^2)        <  H_min(t)
//   H_max(t)   <= 1/sqrt((2/n) t + 1/H_max(0)^2)           (+ tau)
//   1/(2 n t + n/H_min(0)^2)         <  A2_min(t)
//   A2_max(t)  <= 1/(2 t + 1/A2_max(0))                    (+ tau)
// Strict sides are checked to round-off only (the t = 0 row sits exactly on
// its lower envelope); non-strict sides carry the slack tau. Zero-margin
// equality passes: the umbilic family saturates both upper envelopes.
struct EnvelopeViolation {
  double t;
  std::string which;
  double margin;
};
struct EnvelopeReport {
  std::vector<EnvelopeViolation> violations;
  double worst_upper_margin = 0.0;  // max over rows of (value - envelope), <= tau when passing
  bool passed() const { return violations.empty(); }
};
EnvelopeReport envelope_check(const std::vector<DiagnosticsRecord>& rows, int n, double H0_min,
                              double H0_max, double A20_max, double tau);

// s_m(t) = sup|grad^m A| t^{m/2} / M for m = 1,2 from recorded rows over
// t in (0, 1/M]; flags rows exceeding the budgets.
struct DerivativeStats {
  double sup_s1 = 0.0, sup_s2 = 0.0;
  bool within_budget = true;
};
DerivativeStats derivative_monitor(const std::vector<DiagnosticsRecord>& rows, double M_bound,
                                   double C1_budget, double C2_budget);

// eps_k = 1/|A|_max; g -> eps^-2 g, h -> eps^-1 h, time reset to 0. The
// rescaled state has |A|_max = 1 by construction.
std::pair<SpacelikeState, double> parabolic_rescale(const SpacelikeState& st);

// Extremes of sectional curvature over coordinate 2-planes at all points (a
// documented under-sampling of the full Grassmannian).
std::pair<double, double> sectional_range(const SpacelikeState& st);

}  // namespace imcf
