#include "verify_suites.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "imcf/checkpoint.hpp"
#include "imcf/diagnostics.hpp"
#include "imcf/geometry.hpp"
#include "imcf/integrate.hpp"
#include "imcf/oracles.hpp"
#include "imcf/runner.hpp"
#include "imcf/scenario.hpp"
#include "imcf/smallmat.hpp"
#include "imcf/stencil.hpp"
#include "imcf/timeseries.hpp"

namespace imcf::verify {

namespace {

namespace fs = std::filesystem;

struct Check {
  std::vector<CriterionResult>* out;
  void add(const std::string& id, bool ok, const std::string& detail, double secs = 0.0) {
    out->push_back({id, ok, detail, secs});
  }
};

__attribute__((format(printf, 1, 2))) std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Umbilic exactness: n=4, lambda0=1, homogeneous, RK4, dt=1e-3, t in [0,10]
// ---------------------------------------------------------------------------
void suite_umbilic(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  StepControl ctrl;
  ctrl.method = StepMethod::RK4;
  ctrl.cfl = 1.0;
  ctrl.dt_max = 1e-3;
  ctrl.t_end = 10.0;
  ctrl.record_every = 100;
  RunResult res = run_flow(sol.state(0.0), FlowVariant::Simplified, ctrl);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  double worst_lam = 0.0, worst_H = 0.0, worst_A2 = 0.0;
  for (const auto& r : res.records) {
    double lam_exact = sol.lambda(r.t);
    double lam = r.H_max / 4.0;
    worst_lam = std::max(worst_lam, std::abs(lam - lam_exact) / lam_exact);
    double envH = 1.0 / std::sqrt(0.5 * r.t + 1.0 / 16.0);
    double envA = 1.0 / (2.0 * r.t + 0.25);
    worst_H = std::max(worst_H, std::abs(r.H_max - envH));
    worst_A2 = std::max(worst_A2, std::abs(r.A2_max - envA));
  }
  bool done = res.reason == Termination::Completed;
  C.add("1a", done && worst_lam <= 1e-6,
        fmt("max rel lambda error %.3e (tol 1e-6)", worst_lam), wall);
  C.add("1b", done && worst_H <= 1e-6,
        fmt("|H - upper envelope| max %.3e (tol 1e-6)", worst_H));
  C.add("1c", done && worst_A2 <= 1e-6,
        fmt("||A|^2 - upper envelope| max %.3e (tol 1e-6)", worst_A2));
  C.add("1d", wall < 1.0, fmt("runtime %.2fs (budget 1s)", wall));
}

// ---------------------------------------------------------------------------
// Shared torus run for criteria 2-4: 64^2, n=2, pinch-0.2 random seed
// ---------------------------------------------------------------------------
struct TorusRun {
  RunResult res;
  double dx, dt;
};

TorusRun pinched_torus_run(int N, double dt, double t_end, int record_every) {
  DomainSpec dom = DomainSpec::torus(2, N, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.15, 2026);
  StepControl ctrl;
  ctrl.method = StepMethod::RK4;
  ctrl.cfl = 0.5;
  ctrl.dt_max = dt;
  ctrl.t_end = t_end;
  ctrl.record_every = record_every;
  TorusRun tr;
  tr.res = run_flow(st, FlowVariant::Simplified, ctrl);
  tr.dx = dom.spacing[0];
  tr.dt = dt;
  return tr;
}

double monotonicity_defect(const RunResult& res) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < res.records.size(); ++i) {
    double span = res.records[i + 1].t - res.records[i - 1].t;
    double dF = (res.records[i + 1].F_n - res.records[i - 1].F_n) / span;
    double diss = res.records[i].D1 + res.records[i].D2;
    worst = std::max(worst, std::abs(dF + diss) / (diss + 1e-12));
  }
  return worst;
}

// 2. Monotonicity formula defect <= 0.05 at 64^2, order >= 1.5 under halving
void suite_monotonicity(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  TorusRun lvl0 = pinched_torus_run(64, 2.0e-5, 8.0e-4, 4);
  double d0 = monotonicity_defect(lvl0.res);
  TorusRun lvl1 = pinched_torus_run(128, 5.0e-6, 8.0e-4, 4);
  double d1 = monotonicity_defect(lvl1.res);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double order = std::log2(d0 / d1);
  C.add("2a", lvl0.res.reason == Termination::Completed && d0 <= 0.05,
        fmt("defect %.3e at 64^2 (tol 0.05)", d0), wall);
  C.add("2b", d1 < d0 && order >= 1.5,
        fmt("defect %.3e at 128^2, observed order %.2f (>= 1.5)", d1, order));
  C.add("2c", wall < 60.0, fmt("runtime %.1fs (budget 60s)", wall));
}

// 3. Pinching preservation with seed pinch_eps(0) = 0.2
void suite_pinching(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  TorusRun tr = pinched_torus_run(64, 2.0e-5, 0.04, 50);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& rows = tr.res.records;
  double tau = 10.0 * (tr.dx * tr.dx + tr.dt);
  double eps0 = rows.front().pinch_eps;
  double beta0 = rows.front().pinch_beta;
  double worst_eps = 1e300, worst_beta = -1e300, worst_H = 1e300;
  for (const auto& r : rows) {
    worst_eps = std::min(worst_eps, r.pinch_eps);
    worst_beta = std::max(worst_beta, r.pinch_beta);
    worst_H = std::min(worst_H, r.H_min);
  }
  C.add("3a", std::abs(eps0 - 0.2) < 1e-9, fmt("pinch_eps(0) = %.10f (seed anchor 0.2)", eps0),
        wall);
  C.add("3b", tr.res.reason == Termination::Completed && worst_eps >= 0.2 - tau,
        fmt("min eps %.8f >= 0.2 - tau (tau %.2e)", worst_eps, tau));
  C.add("3c", worst_beta <= beta0 + tau,
        fmt("max beta %.8f <= beta(0) + tau = %.8f", worst_beta, beta0 + tau));
  C.add("3d", worst_H > 0.0, fmt("H_min stays positive (min %.4f)", worst_H));
}

// 4. Envelopes (5.1)-(5.2) hold with zero violations on the same run
void suite_envelopes(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  TorusRun tr = pinched_torus_run(64, 2.0e-5, 0.04, 50);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& rows = tr.res.records;
  double tau = 10.0 * (tr.dx * tr.dx + tr.dt);
  EnvelopeReport rep = envelope_check(rows, 2, rows.front().H_min, rows.front().H_max,
                                      rows.front().A2_max, tau);
  std::string which = rep.violations.empty() ? "none" : rep.violations.front().which;
  C.add("4a", tr.res.reason == Termination::Completed && rep.passed(),
        fmt("%zu violations (first: %s), worst upper margin %.2e, tau %.2e",
            rep.violations.size(), which.c_str(), rep.worst_upper_margin, tau),
        wall);
}

// ---------------------------------------------------------------------------
// 5. Constraint propagation on the Poincare patch (budget mode 32^3)
// ---------------------------------------------------------------------------
RunResult patch_constraint_run(int N, double delta, std::uint64_t seed) {
  DomainSpec dom =
      DomainSpec::patch(3, N, 0.45 / std::sqrt(3.0), BoundaryPolicy::DirichletFromOracle);
  UmbilicSolution sol = UmbilicSolution::patch(dom, 1.0);
  SpacelikeState st = sol.state(0.0);
  if (delta > 0.0) {
    Sym2Field P = seeded_perturbation(dom, delta, seed);
    for (std::size_t i = 0; i < st.h.raw().size(); ++i) st.h.raw()[i] += P.raw()[i];
  }
  BoundaryCondition bc;
  bc.impose = [sol, dom](double t, Sym2Field& dg, Sym2Field& dh) {
    double a = 2.0 * sol.n * sol.lambda0 * sol.lambda0;
    double b = sol.n * sol.lambda0 * sol.lambda0 * sol.lambda0 / std::sqrt(sol.scale(t));
    for (std::size_t p = 0; p < dg.npoints(); ++p) {
      if (!dom.on_boundary(p)) continue;
      for (int c = 0; c < dg.ncomp(); ++c) {
        dg.comp(c)[p] = a * sol.g0.comp(c)[p];
        dh.comp(c)[p] = b * sol.g0.comp(c)[p];
      }
    }
  };
  StepControl ctrl;
  ctrl.method = StepMethod::Euler;
  ctrl.cfl = 0.4;
  ctrl.dt_max = 1.0;
  ctrl.t_end = 0.1;
  ctrl.record_every = 120;
  return run_flow(st, FlowVariant::Raw, ctrl, std::nullopt, bc);
}

void suite_constraints(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  RunResult exact = patch_constraint_run(32, 0.0, 0);
  double wall1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  double base = std::max(exact.records.front().normG2, exact.records.front().normC2);
  double worstG = 0.0, worstC = 0.0;
  for (const auto& r : exact.records) {
    worstG = std::max(worstG, r.normG2);
    worstC = std::max(worstC, r.normC2);
  }
  C.add("5a",
        exact.reason == Termination::Completed && worstG <= 4.0 * base && worstC <= 4.0 * base,
        fmt("exact seed: base %.3e, worst G %.2fx, worst C %.2fx (cap 4x)", base, worstG / base,
            worstC / base),
        wall1);

  auto t1 = std::chrono::steady_clock::now();
  RunResult pert = patch_constraint_run(32, 1e-3, 424242);
  double wall2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  double bound = 100.0 * 1e-3 * 1e-3;
  double wG = 0.0, wC = 0.0;
  for (const auto& r : pert.records) {
    wG = std::max(wG, r.normG2);
    wC = std::max(wC, r.normC2);
  }
  C.add("5b", pert.reason == Termination::Completed && wG <= bound && wC <= bound,
        fmt("delta=1e-3: worst normG2 %.3e, normC2 %.3e (cap 100 delta^2 = %.1e)", wG, wC, bound),
        wall2);
  C.add("5c", wall1 + wall2 < 300.0, fmt("runtime %.0fs (budget 300s)", wall1 + wall2));
}

// ---------------------------------------------------------------------------
// 6. De Turck round-trip: raw vs gauge-fixed + diffeo + pullback
// ---------------------------------------------------------------------------
double roundtrip_difference(int N) {
  // slow background diffusion (lambda0 = 0.4) keeps the perturbation's
  // parabolic influence on the boundary exponentially small over T, and
  // quadratic interpolation keeps the recovery chain at O(dx^2) even though
  // |F - id| is far below a cell
  DomainSpec dom =
      DomainSpec::patch(2, N, 0.55 / std::sqrt(2.0), BoundaryPolicy::DirichletFromOracle);
  dom.interp_order = 3;
  UmbilicSolution sol = UmbilicSolution::patch(dom, 0.4);
  SpacelikeState st0 = sol.state(0.0);
  Sym2Field P = seeded_perturbation(dom, 0.5, 777);
  for (std::size_t i = 0; i < st0.h.raw().size(); ++i) st0.h.raw()[i] += P.raw()[i];

  BoundaryCondition bc;
  bc.impose = [sol, dom](double t, Sym2Field& dg, Sym2Field& dh) {
    double a = 2.0 * sol.n * sol.lambda0 * sol.lambda0;
    double b = sol.n * sol.lambda0 * sol.lambda0 * sol.lambda0 / std::sqrt(sol.scale(t));
    for (std::size_t p = 0; p < dg.npoints(); ++p) {
      if (!dom.on_boundary(p)) continue;
      for (int c = 0; c < dg.ncomp(); ++c) {
        dg.comp(c)[p] = a * sol.g0.comp(c)[p];
        dh.comp(c)[p] = b * sol.g0.comp(c)[p];
      }
    }
  };

  StepControl ctrl;
  ctrl.method = StepMethod::RK4;
  ctrl.cfl = 0.5;
  ctrl.dt_max = 1.0;
  ctrl.t_end = 0.05;
  ctrl.record_every = 1000000;

  RunResult raw = run_flow(st0, FlowVariant::Raw, ctrl, std::nullopt, bc);

  GaugeData gd{st0.g, VectorField(dom)};
  double x[kMaxDim];
  for (std::size_t p = 0; p < gd.F.npoints(); ++p) {
    dom.point_coords(p, x);
    for (int a = 0; a < 2; ++a) gd.F(p, a) = x[a];
  }
  RunResult gauge = run_flow(st0, FlowVariant::GaugeFixed, ctrl, gd, bc);
  if (raw.reason != Termination::Completed || gauge.reason != Termination::Completed)
    return std::nan("");

  auto [g_rec, h_rec] =
      pullback_state(gauge.gauge->F, gauge.final_state.g, gauge.final_state.h);
  double worst = 0.0;
  for (std::size_t p = 0; p < g_rec.npoints(); ++p) {
    dom.point_coords(p, x);
    bool skip = false;
    for (int a = 0; a < 2; ++a)
      if (std::abs(x[a]) > 0.8 * (-dom.origin[a])) skip = true;
    if (skip) continue;
    for (int c = 0; c < g_rec.ncomp(); ++c)
      worst = std::max(worst, std::abs(g_rec.comp(c)[p] - raw.final_state.g.comp(c)[p]));
  }
  return worst;
}

void suite_deturck(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<double, double>> levels;
  std::string detail;
  for (int N : {17, 33, 65}) {
    double diff = roundtrip_difference(N);
    double dx = 2.0 * (0.55 / std::sqrt(2.0)) / (N - 1);
    levels.push_back({dx, diff});
    detail += fmt("N=%d: %.3e  ", N, diff);
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool finite_all = std::isfinite(levels[0].second) && std::isfinite(levels[1].second) &&
                    std::isfinite(levels[2].second);
  bool decreasing = finite_all && levels[1].second < levels[0].second &&
                    levels[2].second < levels[1].second;
  double order = finite_all ? convergence_order(levels) : 0.0;
  C.add("6a", decreasing, "sup|g_raw - F*ghat| decreasing: " + detail, wall);
  C.add("6b", decreasing && order >= 1.5, fmt("observed order %.2f (>= 1.5)", order));
}

// ---------------------------------------------------------------------------
// 7. Blow-down: rescaled sectional curvature at t = 100 within 1e-3 of -1/n
// ---------------------------------------------------------------------------
void suite_blowdown(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  StepControl ctrl;
  ctrl.method = StepMethod::RK4;
  ctrl.cfl = 0.5;
  ctrl.dt_max = 0.5;
  ctrl.t_end = 100.0;
  ctrl.record_every = 1000;
  RunResult res = run_flow(sol.state(0.0), FlowVariant::Simplified, ctrl);
  auto [rescaled, eps] = parabolic_rescale(res.final_state);
  auto [smin, smax] = sectional_range(rescaled);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = res.reason == Termination::Completed && std::abs(smin + 0.25) <= 1e-3 &&
            std::abs(smax + 0.25) <= 1e-3;
  C.add("7a", ok,
        fmt("rescaled sec range [%.8f, %.8f] vs -1/4 (tol 1e-3), eps_k = %.3f", smin, smax, eps),
        wall);
}

// ---------------------------------------------------------------------------
// 8. Derivative scaling: sup s1 stable within 20% under dt halving
// ---------------------------------------------------------------------------
double derivative_sup_s1(double dt_max, double M) {
  DomainSpec dom = DomainSpec::torus(2, 64, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.15, 2026);
  // normalize sup|A|(0) to M
  {
    Sym2Field ginv = inverse_metric(st.g);
    ScalarField A2 = norm_A2(st.h, ginv);
    double a2max = 0.0;
    for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
    double s = M / std::sqrt(a2max);
    for (auto& v : st.h.raw()) v *= s;
  }
  StepControl ctrl;
  ctrl.method = StepMethod::Euler;
  ctrl.cfl = 0.5;
  ctrl.dt_max = dt_max;
  ctrl.t_end = 1.0 / M;
  ctrl.record_every = 200;
  RunResult res = run_flow(st, FlowVariant::Simplified, ctrl);
  if (res.reason != Termination::Completed) return std::nan("");
  DerivativeStats ds = derivative_monitor(res.records, M, 1e9, 1e9);
  return ds.sup_s1;
}

void suite_derivative_scaling(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  double M = 5.0;
  double s1a = derivative_sup_s1(2.0e-5, M);
  double s1b = derivative_sup_s1(1.0e-5, M);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double rel = std::abs(s1a - s1b) / std::max(s1a, 1e-300);
  bool ok = std::isfinite(s1a) && std::isfinite(s1b) && s1a > 0.0 && rel <= 0.2;
  C.add("8a", ok, fmt("sup s1 = %.5f vs %.5f under dt halving (drift %.1f%%, cap 20%%)", s1a,
                      s1b, 100.0 * rel),
        wall);
}

// ---------------------------------------------------------------------------
// 9. Kernel convergence: spatial order >= 1.9 on closed-form metrics
// ---------------------------------------------------------------------------
double order_christoffel_conformal() {
  std::vector<std::pair<double, double>> levels;
  for (int N : {16, 32, 64}) {
    DomainSpec dom = DomainSpec::torus(2, N, 1.0);
    Sym2Field g(dom);
    VectorField du(dom);
    double x[2];
    for (std::size_t p = 0; p < g.npoints(); ++p) {
      dom.point_coords(p, x);
      double th = 2.0 * M_PI * x[0];
      double u = 0.3 * std::sin(th);
      for (int i = 0; i < 2; ++i) g(p, i, i) = std::exp(2.0 * u);
      du(p, 0) = 0.3 * std::cos(th) * 2.0 * M_PI;
    }
    ChristoffelField gam = christoffel(g, inverse_metric(g));
    ChristoffelField closed = conformal_christoffel_closed(du);
    double worst = 0.0;
    for (int c = 0; c < gam.ncomp(); ++c)
      for (std::size_t p = 0; p < gam.npoints(); ++p)
        worst = std::max(worst, std::abs(gam.comp(c)[p] - closed.comp(c)[p]));
    levels.push_back({dom.spacing[0], worst});
  }
  return convergence_order(levels);
}

template <class ErrFn>
double patch_order(ErrFn err_of_N) {
  std::vector<std::pair<double, double>> levels;
  for (int N : {17, 33, 65}) levels.push_back(err_of_N(N));
  return convergence_order(levels);
}

void suite_kernel_convergence(Check& C) {
  auto t0 = std::chrono::steady_clock::now();
  double o1 = order_christoffel_conformal();
  C.add("9a", o1 >= 1.9, fmt("christoffel (conformal torus): order %.2f", o1));

  auto mask = [](const DomainSpec& dom, std::size_t p) {
    double x[kMaxDim];
    dom.point_coords(p, x);
    for (int a = 0; a < dom.naxes(); ++a)
      if (std::abs(x[a]) > 0.75 * (-dom.origin[a])) return true;
    return false;
  };

  double o2 = patch_order([&](int N) {
    DomainSpec dom = DomainSpec::patch(2, N, 0.45);
    Sym2Field g = sample_ball_metric(dom, 1.0);
    ChristoffelField gam = christoffel(g, inverse_metric(g));
    ChristoffelField closed = ball_christoffel_closed(dom);
    double worst = 0.0;
    for (int c = 0; c < gam.ncomp(); ++c)
      for (std::size_t p = 0; p < gam.npoints(); ++p)
        if (!mask(dom, p))
          worst = std::max(worst, std::abs(gam.comp(c)[p] - closed.comp(c)[p]));
    return std::pair<double, double>{dom.spacing[0], worst};
  });
  C.add("9b", o2 >= 1.9, fmt("christoffel (hyperbolic patch): order %.2f", o2));

  double o3 = patch_order([&](int N) {
    DomainSpec dom = DomainSpec::patch(2, N, 0.45);
    Sym2Field g = sample_ball_metric(dom, 1.0);
    RiemannReport rep = riemann(g, christoffel(g, inverse_metric(g)));
    double worst = 0.0;
    for (std::size_t p = 0; p < g.npoints(); ++p) {
      if (mask(dom, p)) continue;
      double expect = -(g(p, 0, 0) * g(p, 1, 1) - g(p, 0, 1) * g(p, 0, 1));
      worst = std::max(worst, std::abs(rep.R(p, 0, 1, 0, 1) - expect));
    }
    return std::pair<double, double>{dom.spacing[0], worst};
  });
  C.add("9c", o3 >= 1.9, fmt("riemann (hyperbolic patch): order %.2f", o3));

  // covariant derivative of f*g against df x g on the conformal torus
  std::vector<std::pair<double, double>> lv;
  for (int N : {16, 32, 64}) {
    DomainSpec dom = DomainSpec::torus(2, N, 1.0);
    Sym2Field g(dom);
    double x[2];
    for (std::size_t p = 0; p < g.npoints(); ++p) {
      dom.point_coords(p, x);
      double u = 0.2 * std::sin(2.0 * M_PI * x[0]);
      for (int i = 0; i < 2; ++i) g(p, i, i) = std::exp(2.0 * u);
    }
    Sym2Field ginv = inverse_metric(g);
    ChristoffelField gam = christoffel(g, ginv);
    Sym2Field fg = g;
    Sym3Field expect(dom);
    for (std::size_t p = 0; p < g.npoints(); ++p) {
      dom.point_coords(p, x);
      double th = 2.0 * M_PI * x[1];
      double f = 1.0 + 0.5 * std::cos(th);
      double df = -M_PI * std::sin(th);
      for (int j = 0; j < 2; ++j)
        for (int k = j; k < 2; ++k) {
          expect(p, 1, j, k) = df * g(p, j, k);
          fg(p, j, k) *= f;
        }
    }
    Sym3Field S = covd_sym2(fg, gam);
    double worst = 0.0;
    for (int c = 0; c < S.ncomp(); ++c)
      for (std::size_t p = 0; p < S.npoints(); ++p)
        worst = std::max(worst, std::abs(S.comp(c)[p] - expect.comp(c)[p]));
    lv.push_back({dom.spacing[0], worst});
  }
  double o4 = convergence_order(lv);
  C.add("9d", o4 >= 1.9, fmt("covariant derivative (f*g torus): order %.2f", o4),
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// ---------------------------------------------------------------------------
// 10. Infrastructure: resume bitwise, CSV golden header, validation catalogue
// ---------------------------------------------------------------------------
void suite_infrastructure(Check& C, const std::string& work_dir) {
  auto t0 = std::chrono::steady_clock::now();
  const char* sc_text = R"(name = infra-roundtrip
[domain]
kind = torus
n = 2
points = 16
extent = 1.0
[seed]
family = torus-random
amplitude = 0.15
seed = 99
[flow]
variant = simplified
[step]
method = rk4
cfl = 0.5
dt_max = 2e-4
t_end = 0.01
record_every = 10
checkpoint_every = 20
)";
  ScenarioParse parsed = parse_scenario(sc_text);
  bool parsed_ok = parsed.ok();
  std::string dir_a = (fs::path(work_dir) / "straight").string();
  std::string dir_b = (fs::path(work_dir) / "resumed").string();
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  bool bitwise = false;
  std::string detail = "scenario failed to parse";
  if (parsed_ok) {
    ExecutionReport straight = execute_scenario(*parsed.scenario, dir_a);
    std::string mid = dir_a + "/checkpoint_00000020.ck";
    if (straight.exit_code == 0 && fs::exists(mid)) {
      ExecutionReport resumed = resume_checkpoint(mid, dir_b);
      auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
      };
      std::string a = slurp(straight.final_checkpoint_path);
      std::string b = slurp(resumed.final_checkpoint_path);
      bitwise = !a.empty() && a == b;
      detail = fmt("final checkpoints %zu bytes, byte-identical: %s", a.size(),
                   bitwise ? "yes" : "NO");
    } else {
      detail = "straight run failed or checkpoint missing";
    }
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  C.add("10a", bitwise, detail, wall);

  std::string expect_header =
      "t,H_min,H_max,A2_min,A2_max,eps,beta,F_n,D1,D2,normG2,normC2,sec_min,sec_max,vol,s1,s2";
  bool header_ok = std::string(kCsvHeader) == expect_header;
  if (header_ok && parsed_ok) {
    std::ifstream in(dir_a + "/timeseries.csv");
    std::string line;
    std::getline(in, line);
    header_ok = line == expect_header;
  }
  C.add("10b", header_ok, "CSV golden header match");

  // validation catalogue: every class of error is reported, all at once
  const char* bad = R"(name = broken
[domain]
kind = patch
n = 3
points = 3
radius = 0.9
boundary = sticky
[seed]
family = torus-random
amplitude = 0.1
seed = 7
[flow]
variant = fancy
[step]
method = rk4
cfl = 1.5
t_end = 0.01
)";
  ScenarioParse r = parse_scenario(bad);
  auto has = [&r](const char* f) {
    for (const auto& i : r.issues)
      if (i.field == f) return true;
    return false;
  };
  bool catalogue = !r.ok() && has("domain.points") && has("domain.radius") &&
                   has("domain.boundary") && has("seed.family") && has("flow.variant") &&
                   has("step.cfl") && has("step.dt_max");
  C.add("10c", catalogue, fmt("validation catalogue: %zu issues reported in one pass",
                              r.issues.size()));

  ScenarioParse pe = parse_scenario("name = x\n???\n");
  bool parse_line = !pe.ok() && !pe.issues.empty() && pe.issues.front().line == 2;
  C.add("10d", parse_line, "parse errors carry line numbers");
}

}  // namespace

std::vector<std::string> all_suites() {
  return {"umbilic",  "monotonicity", "pinching",           "envelopes",
          "constraints", "deturck",   "blowdown",           "derivative-scaling",
          "kernel-convergence",       "infrastructure"};
}

std::vector<CriterionResult> run_suite(const std::string& name, const std::string& work_dir) {
  std::vector<CriterionResult> out;
  Check C{&out};
  if (name == "umbilic")
    suite_umbilic(C);
  else if (name == "monotonicity")
    suite_monotonicity(C);
  else if (name == "pinching")
    suite_pinching(C);
  else if (name == "envelopes")
    suite_envelopes(C);
  else if (name == "constraints")
    suite_constraints(C);
  else if (name == "deturck")
    suite_deturck(C);
  else if (name == "blowdown")
    suite_blowdown(C);
  else if (name == "derivative-scaling")
    suite_derivative_scaling(C);
  else if (name == "kernel-convergence")
    suite_kernel_convergence(C);
  else if (name == "infrastructure")
    suite_infrastructure(C, work_dir);
  else
    out.push_back({name, false, "unknown suite", 0.0});
  return out;
}

int run_and_report(const std::vector<std::string>& names, const std::string& work_dir) {
  std::vector<std::string> expanded;
  for (const auto& n : names) {
    if (n == "all") {
      auto a = all_suites();
      expanded.insert(expanded.end(), a.begin(), a.end());
    } else {
      expanded.push_back(n);
    }
  }
  int failures = 0;
  for (const auto& suite : expanded) {
    std::vector<CriterionResult> results = run_suite(suite, work_dir);
    for (const auto& r : results) {
      bool ok = r.passed;
      if (!ok) ++failures;
      if (r.seconds > 0.0)
        std::printf("[%s] criterion %-3s %s  %s (%.1fs)\n", ok ? "PASS" : "FAIL", r.id.c_str(),
                    suite.c_str(), r.detail.c_str(), r.seconds);
      else
        std::printf("[%s] criterion %-3s %s  %s\n", ok ? "PASS" : "FAIL", r.id.c_str(),
                    suite.c_str(), r.detail.c_str());
      std::fflush(stdout);
    }
  }
  std::printf("%s: %d criterion check(s) failed\n", failures ? "FAILURE" : "SUCCESS", failures);
  return failures ? 1 : 0;
}

}  // namespace imcf::verify
