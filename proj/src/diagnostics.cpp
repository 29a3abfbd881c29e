#include "imcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"
#include "imcf/smallmat.hpp"

namespace imcf {

namespace {

constexpr int kShellWidth = 2;  // boundary cells excluded from residual norms
constexpr double kHGuard = 1e-10;

Riem4Field gauss_from_bundle(const CurvatureBundle& b, const Sym2Field& h) {
  Riem4Field G = b.R;
  Riem4Field hh = riemann_from_gauss(h);
  for (std::size_t i = 0; i < G.raw().size(); ++i) G.raw()[i] -= hh.raw()[i];
  return G;
}

CodazziField codazzi_from_covd(const Sym3Field& S) {
  const DomainSpec& dom = S.dom();
  int n = dom.n;
  CodazziField C(dom);
  for (std::size_t p = 0; p < S.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          C.packed(p, pair_index(n, i, j), k) = S(p, i, j, k) - S(p, j, i, k);
  return C;
}

// |C|^2 with all three slots raised by ginv, dense per-point evaluation.
ScalarField codazzi_norm2(const CodazziField& C, const Sym2Field& ginv) {
  const DomainSpec& dom = C.dom();
  int n = dom.n;
  ScalarField out(dom);
  double lo[kMaxDim * kMaxDim * kMaxDim], up[kMaxDim * kMaxDim * kMaxDim];
  for (std::size_t p = 0; p < C.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) lo[(i * n + j) * n + k] = C(p, i, j, k);
    // raise slot by slot
    for (int slot = 0; slot < 3; ++slot) {
      const double* src = (slot % 2 == 0) ? lo : up;
      double* dst = (slot % 2 == 0) ? up : lo;
      int stride = (slot == 0) ? n * n : (slot == 1) ? n : 1;
      int outer = (n * n * n) / (stride * n);
      for (int o = 0; o < outer; ++o)
        for (int r = 0; r < stride; ++r) {
          int base = o * stride * n + r;
          for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < n; ++b) s += ginv(p, a, b) * src[base + b * stride];
            dst[base + a * stride] = s;
          }
        }
    }
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v += lo[(i * n + j) * n + k] * C(p, i, j, k);
    out(p) = v;
  }
  return out;
}

struct NormPair {
  double linf = 0.0, mean = 0.0;
};

NormPair masked_norms(const ScalarField& f) {
  const DomainSpec& dom = f.dom();
  NormPair np;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < f.npoints(); ++p) {
    if (dom.in_boundary_shell(p, kShellWidth)) continue;
    np.linf = std::max(np.linf, f(p));
    sum += f(p);
    ++count;
  }
  np.mean = count ? sum / static_cast<double>(count) : 0.0;
  return np;
}

}  // namespace

Riem4Field gauss_residual(const SpacelikeState& st) {
  CurvatureBundle b = curvature_bundle(st.g, st.h);
  return gauss_from_bundle(b, st.h);
}

CodazziField codazzi_residual(const SpacelikeState& st) {
  Sym2Field ginv = inverse_metric(st.g);
  ChristoffelField gam = christoffel(st.g, ginv);
  return codazzi_from_covd(covd_sym2(st.h, gam));
}

ConstraintResidual residual_norms(const SpacelikeState& st) {
  CurvatureBundle b = curvature_bundle(st.g, st.h);
  ConstraintResidual r;
  r.G = gauss_from_bundle(b, st.h);
  r.C = codazzi_from_covd(covd_sym2(st.h, b.gam));
  NormPair gG = masked_norms(riem4_norm2(r.G, b.ginv));
  NormPair gC = masked_norms(codazzi_norm2(r.C, b.ginv));
  r.linfG2 = gG.linf;
  r.l2G2 = gG.mean;
  r.linfC2 = gC.linf;
  r.l2C2 = gC.mean;
  return r;
}

std::pair<double, double> pinching_ratios(const SpacelikeState& st) {
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  Sym2Field ginv = inverse_metric(st.g);
  int m2 = sym2_count(n);
  double hp[sym2_count(kMaxDim)], bp[sym2_count(kMaxDim)];
  double eps = std::numeric_limits<double>::infinity();
  double beta = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < st.g.npoints(); ++p) {
    double H = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H += ginv(p, i, j) * st.h(p, i, j);
    if (!(H > 0.0)) throw NonpositiveH(p, H);
    for (int c = 0; c < m2; ++c) {
      hp[c] = st.h.comp(c)[p];
      bp[c] = H * st.g.comp(c)[p];
    }
    double lo, hi;
    generalized_eig_range(n, hp, bp, &lo, &hi);
    eps = std::min(eps, lo);
    beta = std::max(beta, hi);
  }
  return {eps, beta};
}

MonotonicityReport monotonicity_report(const SpacelikeState& st, bool allow_open_patch) {
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  Sym2Field ginv = inverse_metric(st.g);
  ScalarField H = mean_curvature(st.h, ginv);
  for (std::size_t p = 0; p < H.npoints(); ++p)
    if (H(p) < kHGuard) throw NonpositiveH(p, H(p));

  VectorField gradH = grad_scalar(H);
  Sym2Field traceless = st.h;
  for (std::size_t p = 0; p < st.h.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) traceless(p, i, j) -= (H(p) / n) * st.g(p, i, j);
  ScalarField tl2 = sym2_norm2(traceless, ginv);

  ScalarField fn(dom), d1(dom), d2(dom);
  for (std::size_t p = 0; p < H.npoints(); ++p) {
    double Hn = std::pow(H(p), n);
    double gh2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gh2 += ginv(p, i, j) * gradH(p, i) * gradH(p, j);
    fn(p) = Hn;
    d1(p) = (gh2 / (H(p) * H(p))) * Hn;
    d2(p) = tl2(p) * Hn;
  }
  MonotonicityReport rep;
  rep.F_n = integrate_scalar(fn, st.g, allow_open_patch);
  rep.D1 = n * (n - 1.0) * integrate_scalar(d1, st.g, allow_open_patch);
  rep.D2 = n * integrate_scalar(d2, st.g, allow_open_patch);
  return rep;
}

std::pair<double, double> sectional_range(const SpacelikeState& st) {
  CurvatureBundle b = curvature_bundle(st.g, st.h);
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < st.g.npoints(); ++p) {
    if (dom.in_boundary_shell(p, kShellWidth)) continue;  // one-sided dGamma noise
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double area2 = st.g(p, i, i) * st.g(p, j, j) - st.g(p, i, j) * st.g(p, i, j);
        double sec = b.R(p, i, j, i, j) / area2;
        lo = std::min(lo, sec);
        hi = std::max(hi, sec);
      }
  }
  return {lo, hi};
}

std::pair<SpacelikeState, double> parabolic_rescale(const SpacelikeState& st) {
  Sym2Field ginv = inverse_metric(st.g);
  ScalarField A2 = norm_A2(st.h, ginv);
  double a2max = 0.0;
  for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
  if (!(a2max > 0.0)) throw ZeroSecondFundamentalForm();
  double eps = 1.0 / std::sqrt(a2max);
  SpacelikeState out;
  out.g = st.g;
  out.h = st.h;
  out.t = 0.0;
  double ig = 1.0 / (eps * eps), ih = 1.0 / eps;
  for (auto& v : out.g.raw()) v *= ig;
  for (auto& v : out.h.raw()) v *= ih;
  return {std::move(out), eps};
}

DiagnosticsRecord make_record(const SpacelikeState& st, double M_norm) {
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  double nan = std::numeric_limits<double>::quiet_NaN();
  DiagnosticsRecord r;
  r.t = st.t;

  CurvatureBundle b = curvature_bundle(st.g, st.h);
  ScalarField H = mean_curvature(st.h, b.ginv);
  ScalarField A2 = norm_A2(st.h, b.ginv);
  r.H_min = r.H_max = H(0);
  r.A2_min = r.A2_max = A2(0);
  for (std::size_t p = 1; p < H.npoints(); ++p) {
    r.H_min = std::min(r.H_min, H(p));
    r.H_max = std::max(r.H_max, H(p));
    r.A2_min = std::min(r.A2_min, A2(p));
    r.A2_max = std::max(r.A2_max, A2(p));
  }

  try {
    auto [eps, beta] = pinching_ratios(st);
    r.pinch_eps = eps;
    r.pinch_beta = beta;
  } catch (const NonpositiveH&) {
    r.pinch_eps = r.pinch_beta = nan;
  }

  try {
    MonotonicityReport m = monotonicity_report(st, /*allow_open_patch=*/true);
    r.F_n = m.F_n;
    r.D1 = m.D1;
    r.D2 = m.D2;
  } catch (const NonpositiveH&) {
    r.F_n = r.D1 = r.D2 = nan;
  }

  {
    Riem4Field G = gauss_from_bundle(b, st.h);
    Sym3Field S = covd_sym2(st.h, b.gam);
    CodazziField C = codazzi_from_covd(S);
    r.normG2 = masked_norms(riem4_norm2(G, b.ginv)).linf;
    r.normC2 = masked_norms(codazzi_norm2(C, b.ginv)).linf;

    ScalarField gA2 = sym3_norm2(S, b.ginv);
    double sup1 = 0.0;
    for (std::size_t p = 0; p < gA2.npoints(); ++p) sup1 = std::max(sup1, gA2(p));
    r.sup_grad_A = std::sqrt(std::max(0.0, sup1));
    Tensor4Field U = covd_sym3(S, b.gam);
    ScalarField g2A2 = tensor4_norm2(U, b.ginv);
    double sup2 = 0.0;
    for (std::size_t p = 0; p < g2A2.npoints(); ++p) sup2 = std::max(sup2, g2A2(p));
    r.sup_grad2_A = std::sqrt(std::max(0.0, sup2));
  }

  {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < st.g.npoints(); ++p) {
      if (dom.in_boundary_shell(p, kShellWidth)) continue;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double area2 = st.g(p, i, i) * st.g(p, j, j) - st.g(p, i, j) * st.g(p, i, j);
          double sec = b.R(p, i, j, i, j) / area2;
          lo = std::min(lo, sec);
          hi = std::max(hi, sec);
        }
    }
    r.sec_min = lo;
    r.sec_max = hi;
  }

  {
    ScalarField one(dom);
    one.fill(1.0);
    r.vol = integrate_scalar(one, st.g, /*allow_open_patch=*/true);
  }

  if (M_norm > 0.0) {
    r.s1 = r.sup_grad_A * std::sqrt(st.t) / M_norm;
    r.s2 = r.sup_grad2_A * st.t / M_norm;
  }
  return r;
}

EnvelopeReport envelope_check(const std::vector<DiagnosticsRecord>& rows, int n, double H0_min,
                              double H0_max, double A20_max, double tau) {
  EnvelopeReport rep;
  for (const auto& r : rows) {
    double t = r.t;
    double envHlo = 1.0 / std::sqrt(2.0 * t + 1.0 / (H0_min * H0_min));
    double envHhi = 1.0 / std::sqrt((2.0 / n) * t + 1.0 / (H0_max * H0_max));
    double envAlo = 1.0 / (2.0 * n * t + n / (H0_min * H0_min));
    double envAhi = 1.0 / (2.0 * t + 1.0 / A20_max);

    auto strict_slack = [](double env) { return 1e-12 * (1.0 + std::abs(env)); };
    if (r.H_min < envHlo - strict_slack(envHlo))
      rep.violations.push_back({t, "H_lower", envHlo - r.H_min});
    if (r.H_max > envHhi + tau)
      rep.violations.push_back({t, "H_upper", r.H_max - envHhi});
    if (r.A2_min < envAlo - strict_slack(envAlo))
      rep.violations.push_back({t, "A2_lower", envAlo - r.A2_min});
    if (r.A2_max > envAhi + tau)
      rep.violations.push_back({t, "A2_upper", r.A2_max - envAhi});

    rep.worst_upper_margin = std::max(rep.worst_upper_margin,
                                      std::max(r.H_max - envHhi, r.A2_max - envAhi));
  }
  return rep;
}

DerivativeStats derivative_monitor(const std::vector<DiagnosticsRecord>& rows, double M_bound,
                                   double C1_budget, double C2_budget) {
  DerivativeStats st;
  for (const auto& r : rows) {
    if (!(r.t > 0.0) || r.t > 1.0 / M_bound) continue;
    st.sup_s1 = std::max(st.sup_s1, r.sup_grad_A * std::sqrt(r.t) / M_bound);
    st.sup_s2 = std::max(st.sup_s2, r.sup_grad2_A * r.t / M_bound);
  }
  if (st.sup_s1 > C1_budget || st.sup_s2 > C2_budget) st.within_budget = false;
  return st;
}

}  // namespace imcf
