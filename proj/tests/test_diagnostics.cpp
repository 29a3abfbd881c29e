#include <doctest.h>

#include <cmath>

#include "imcf/diagnostics.hpp"
#include "imcf/errors.hpp"
#include "imcf/integrate.hpp"
#include "imcf/oracles.hpp"
#include "imcf/smallmat.hpp"

using namespace imcf;

namespace {

Sym2Field flat2(const DomainSpec& dom) {
  Sym2Field g(dom);
  for (std::size_t p = 0; p < g.npoints(); ++p)
    for (int i = 0; i < dom.n; ++i) g(p, i, i) = 1.0;
  return g;
}

}  // namespace

TEST_CASE("residuals vanish identically on flat static data") {
  DomainSpec dom = DomainSpec::torus(2, 8, 1.0);
  SpacelikeState st{flat2(dom), Sym2Field(dom), 0.0};
  ConstraintResidual r = residual_norms(st);
  CHECK(r.linfG2 == 0.0);
  CHECK(r.linfC2 == 0.0);
}

TEST_CASE("hyperboloid residual norms scale like dx^4 (squared O(dx^2))") {
  double prev = 0.0;
  for (int N : {17, 33}) {
    DomainSpec dom = DomainSpec::patch(2, N, 0.4);
    SpacelikeState st = UmbilicSolution::patch(dom, 1.0).state(0.0);
    ConstraintResidual r = residual_norms(st);
    CHECK(r.linfC2 < 1e-20);  // discrete metric compatibility is exact
    if (N == 33) {
      CHECK(r.linfG2 < prev / 8.0);  // ~16x per halving
      CHECK(r.linfG2 < 1e-3);
    }
    prev = r.linfG2;
  }
}

TEST_CASE("codazzi residual matches an independent stencil path on the flat torus") {
  DomainSpec dom = DomainSpec::torus(2, 16, 1.0);
  SpacelikeState st{flat2(dom), Sym2Field(dom), 0.0};
  Sym2Field P = seeded_perturbation(dom, 0.3, 17);
  for (std::size_t i = 0; i < st.h.raw().size(); ++i) st.h.raw()[i] += P.raw()[i];

  CodazziField C = codazzi_residual(st);

  // independent: plain periodic central differences, Gamma = 0 on flat data
  int N = dom.shape[0];
  auto at = [&](const Sym2Field& f, int i0, int i1, int a, int b) {
    std::size_t p = static_cast<std::size_t>(((i0 % N + N) % N)) * N + ((i1 % N + N) % N);
    return f(p, a, b);
  };
  double inv2dx = 1.0 / (2.0 * dom.spacing[0]);
  double worst = 0.0;
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1) {
      std::size_t p = static_cast<std::size_t>(i0) * N + i1;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double d0 = (at(st.h, i0 + 1, i1, a, b) - at(st.h, i0 - 1, i1, a, b)) * inv2dx;
          double d1 = (at(st.h, i0, i1 + 1, a, b) - at(st.h, i0, i1 - 1, a, b)) * inv2dx;
          // C_{01k}: nabla_0 h_{1k} - nabla_1 h_{0k} with k = b, first pair (0,1)
          if (a == 1) {
            double expect = d0 - (at(st.h, i0, i1 + 1, 0, b) - at(st.h, i0, i1 - 1, 0, b)) * inv2dx;
            worst = std::max(worst, std::abs(C(p, 0, 1, b) - expect));
          }
          (void)d1;
        }
    }
  CHECK(worst < 1e-13);
}

TEST_CASE("pinching ratios: umbilic, explicit eigenvalues, trace pigeonhole") {
  SpacelikeState um = UmbilicSolution::homogeneous(4, 1.0).state(0.0);
  auto [e1, b1] = pinching_ratios(um);
  CHECK(e1 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(b1 == doctest::Approx(0.25).epsilon(1e-12));

  DomainSpec dom = DomainSpec::homogeneous(2);
  SpacelikeState st{Sym2Field(dom), Sym2Field(dom), 0.0};
  st.g(0, 0, 0) = st.g(0, 1, 1) = 1.0;
  st.h(0, 0, 0) = 1.0;
  st.h(0, 1, 1) = 2.0;
  auto [e2, b2] = pinching_ratios(st);
  CHECK(e2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(b2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // random positive h: eps <= 1/n <= beta always
  SplitMix64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    SpacelikeState r{Sym2Field(dom), Sym2Field(dom), 0.0};
    r.g(0, 0, 0) = r.g(0, 1, 1) = 1.0;
    double a = 0.2 + rng.uniform(), c = 0.2 + rng.uniform(), b = 0.3 * rng.symmetric();
    if (b * b >= a * c) b = 0.0;
    r.h(0, 0, 0) = a;
    r.h(0, 1, 1) = c;
    r.h(0, 0, 1) = b;
    auto [eps, beta] = pinching_ratios(r);
    CHECK(eps <= 0.5 + 1e-12);
    CHECK(beta >= 0.5 - 1e-12);
  }

  SpacelikeState neg{Sym2Field(dom), Sym2Field(dom), 0.0};
  neg.g(0, 0, 0) = neg.g(0, 1, 1) = 1.0;
  neg.h(0, 0, 0) = -1.0;
  neg.h(0, 1, 1) = 0.5;
  CHECK_THROWS_AS((void)pinching_ratios(neg), NonpositiveH);
}

TEST_CASE("envelope check: umbilic saturation passes with zero slack") {
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  std::vector<DiagnosticsRecord> rows;
  for (double t : {0.0, 0.1, 0.5, 1.0, 5.0, 20.0}) {
    DiagnosticsRecord r;
    r.t = t;
    double lam = sol.lambda(t);
    r.H_min = r.H_max = 4.0 * lam;
    r.A2_min = r.A2_max = 4.0 * lam * lam;
    rows.push_back(r);
  }
  EnvelopeReport rep = envelope_check(rows, 4, 4.0, 4.0, 4.0, 0.0);
  CHECK(rep.passed());
  // upper margins are exactly zero (saturation)
  CHECK(std::abs(rep.worst_upper_margin) < 1e-12);

  // lower bounds hold strictly for t > 0
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double t = rows[i].t;
    CHECK(rows[i].H_min > 1.0 / std::sqrt(2.0 * t + 1.0 / 16.0));
    CHECK(rows[i].A2_min > 1.0 / (8.0 * t + 4.0 / 16.0));
  }

  // a violated row is reported with its margin
  rows[2].H_max += 0.5;
  EnvelopeReport bad = envelope_check(rows, 4, 4.0, 4.0, 4.0, 1e-3);
  CHECK(!bad.passed());
  CHECK(bad.violations[0].which == "H_upper");
  CHECK(bad.violations[0].margin > 0.4);
}

TEST_CASE("monotonicity: umbilic conserves F_n with zero dissipation") {
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  double F0 = 0.0;
  for (double t : {0.0, 0.5, 2.0}) {
    MonotonicityReport m = monotonicity_report(sol.state(t));
    CHECK(m.D1 == 0.0);
    CHECK(m.D2 < 1e-25);
    if (t == 0.0)
      F0 = m.F_n;
    else
      CHECK(m.F_n == doctest::Approx(F0).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity: pointwise-umbilic h with varying trace has D2 = 0, D1 > 0") {
  DomainSpec dom = DomainSpec::torus(2, 32, 1.0);
  Sym2Field g = flat2(dom);
  Sym2Field h(dom);
  double x[2];
  for (std::size_t p = 0; p < h.npoints(); ++p) {
    dom.point_coords(p, x);
    double f = 1.5 + 0.5 * std::sin(2.0 * M_PI * x[0]);
    for (int i = 0; i < 2; ++i) h(p, i, i) = f;
  }
  MonotonicityReport m = monotonicity_report({g, h, 0.0});
  CHECK(m.D2 < 1e-24);
  CHECK(m.D1 > 1e-3);
}

TEST_CASE("doubling the h-perturbation roughly doubles s1 in the linear regime") {
  DomainSpec dom = DomainSpec::torus(2, 32, 1.0);
  auto sup_s1_early = [&](double amp) {
    SpacelikeState st{Sym2Field(dom), Sym2Field(dom), 0.0};
    for (std::size_t p = 0; p < st.g.npoints(); ++p)
      for (int i = 0; i < 2; ++i) {
        st.g(p, i, i) = 1.0;
        st.h(p, i, i) = 1.5;
      }
    Sym2Field P = seeded_perturbation(dom, amp, 5150);
    for (std::size_t i = 0; i < st.h.raw().size(); ++i) st.h.raw()[i] += P.raw()[i];
    StepControl ctrl;
    ctrl.method = StepMethod::Euler;
    ctrl.cfl = 0.5;
    ctrl.dt_max = 5e-5;
    ctrl.t_end = 1e-3;
    ctrl.record_every = 5;
    RunResult res = run_flow(st, FlowVariant::Simplified, ctrl);
    DerivativeStats ds = derivative_monitor(res.records, res.M_norm, 1e9, 1e9);
    return ds.sup_s1;
  };
  double a = sup_s1_early(0.05);
  double b = sup_s1_early(0.10);
  CHECK(a > 0.0);
  CHECK(b / a > 1.6);
  CHECK(b / a < 2.4);
}

TEST_CASE("monotonicity defect dF/dt + D1 + D2 is small on a short torus run") {
  DomainSpec dom = DomainSpec::torus(2, 32, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.1, 31);
  StepControl ctrl;
  ctrl.method = StepMethod::RK4;
  ctrl.cfl = 0.5;
  ctrl.dt_max = 2e-5;
  ctrl.t_end = 40 * 2e-5;
  ctrl.record_every = 10;
  RunResult res = run_flow(st, FlowVariant::Simplified, ctrl);
  REQUIRE(res.records.size() == 5);
  // F_n non-increasing along the run
  for (std::size_t i = 1; i < res.records.size(); ++i)
    CHECK(res.records[i].F_n <= res.records[i - 1].F_n + 1e-10);
  // centered dF/dt at interior records
  for (std::size_t i = 1; i + 1 < res.records.size(); ++i) {
    double dt = res.records[i + 1].t - res.records[i - 1].t;
    double dF = (res.records[i + 1].F_n - res.records[i - 1].F_n) / dt;
    double diss = res.records[i].D1 + res.records[i].D2;
    CHECK(std::abs(dF + diss) / (diss + 1e-12) < 0.05);
  }
}

TEST_CASE("parabolic rescale: unit |A|, idempotence, umbilic blow-down") {
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  SpacelikeState st = sol.state(3.0);
  auto [rs, eps] = parabolic_rescale(st);
  Sym2Field ginv = inverse_metric(rs.g);
  ScalarField A2 = norm_A2(rs.h, ginv);
  CHECK(A2(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eps == doctest::Approx(1.0 / (2.0 * sol.lambda(3.0))).epsilon(1e-12));

  auto [rs2, eps2] = parabolic_rescale(rs);
  CHECK(eps2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rs2.g(0, 0, 0) == doctest::Approx(rs.g(0, 0, 0)).epsilon(1e-14));

  // rescaled sectional curvature is exactly -1/n on umbilic data
  auto [smin, smax] = sectional_range(rs);
  CHECK(smin == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(smax == doctest::Approx(-0.25).epsilon(1e-12));

  SpacelikeState zero{st.g, Sym2Field(st.dom()), 0.0};
  CHECK_THROWS_AS((void)parabolic_rescale(zero), ZeroSecondFundamentalForm);
}

TEST_CASE("rescale commutes with the RHS up to the eps^2 time factor") {
  DomainSpec dom = DomainSpec::torus(2, 16, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.2, 55);
  auto [rs, eps] = parabolic_rescale(st);
  FlowRhs a = rhs_raw(rs);
  FlowRhs b = rhs_raw(st);
  // dg is scale invariant; dh picks up one factor of eps
  double worst = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < a.dg.raw().size(); ++i) {
    worst = std::max(worst, std::abs(a.dg.raw()[i] - b.dg.raw()[i]));
    worst = std::max(worst, std::abs(a.dh.raw()[i] - eps * b.dh.raw()[i]));
    mag = std::max(mag, std::abs(b.dg.raw()[i]));
  }
  CHECK(worst < 1e-11 * mag);
}

TEST_CASE("sectional range: flat zero, hyperbolic near -1") {
  DomainSpec dom = DomainSpec::torus(2, 8, 1.0);
  SpacelikeState flat{flat2(dom), Sym2Field(dom), 0.0};
  auto [a, b] = sectional_range(flat);
  CHECK(a == 0.0);
  CHECK(b == 0.0);

  DomainSpec pd = DomainSpec::patch(2, 33, 0.35);
  SpacelikeState hyp = UmbilicSolution::patch(pd, 1.0).state(0.0);
  auto [c, d] = sectional_range(hyp);
  CHECK(c == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(d == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("derivative monitor: umbilic has s_m identically zero") {
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  std::vector<DiagnosticsRecord> rows;
  for (double t : {0.05, 0.1, 0.2}) rows.push_back(make_record(sol.state(t), 2.0));
  DerivativeStats st = derivative_monitor(rows, 2.0, 1.0, 1.0);
  CHECK(st.sup_s1 == 0.0);
  CHECK(st.sup_s2 == 0.0);
  CHECK(st.within_budget);
}

TEST_CASE("diagnostics record carries finite fields on an H > 0 run") {
  DomainSpec dom = DomainSpec::torus(2, 16, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.1, 77);
  DiagnosticsRecord r = make_record(st, 4.0);
  CHECK(std::isfinite(r.H_min));
  CHECK(r.H_min <= r.H_max);
  CHECK(r.A2_min <= r.A2_max);
  CHECK(std::isfinite(r.pinch_eps));
  CHECK(r.pinch_eps == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(r.pinch_beta == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(std::isfinite(r.F_n));
  CHECK(r.vol > 0.0);
  CHECK(r.s1 == 0.0);  // t = 0
}
