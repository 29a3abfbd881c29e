#include "imcf/oracles.hpp"

#include <cmath>

#include "imcf/errors.hpp"
#include "imcf/smallmat.hpp"

namespace imcf {

void hyperbolic_ball_metric(int n, const double* x, double* g_packed) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
  if (r2 >= 1.0) throw OutsideChart("ball chart point has |x| >= 1");
  double f = 2.0 / (1.0 - r2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g_packed[sym2_index(n, i, j)] = (i == j) ? f * f : 0.0;
}

Sym2Field sample_ball_metric(const DomainSpec& dom, double lambda0) {
  int n = dom.n;
  Sym2Field g(dom);
  double x[kMaxDim], gp[sym2_count(kMaxDim)];
  double inv_l2 = 1.0 / (lambda0 * lambda0);
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    dom.point_coords(p, x);
    hyperbolic_ball_metric(n, x, gp);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(p, i, j) = inv_l2 * gp[sym2_index(n, i, j)];
  }
  return g;
}

ChristoffelField ball_christoffel_closed(const DomainSpec& dom) {
  int n = dom.n;
  ChristoffelField gam(dom);
  double x[kMaxDim];
  for (std::size_t p = 0; p < gam.npoints(); ++p) {
    dom.point_coords(p, x);
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    double w = 2.0 / (1.0 - r2);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = 0.0;
          if (k == j) v += w * x[i];
          if (k == i) v += w * x[j];
          if (i == j) v -= w * x[k];
          gam(p, k, i, j) = v;
        }
  }
  return gam;
}

ChristoffelField conformal_christoffel_closed(const VectorField& du) {
  const DomainSpec& dom = du.dom();
  int n = dom.n;
  ChristoffelField gam(dom);
  for (std::size_t p = 0; p < gam.npoints(); ++p)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = 0.0;
          if (k == j) v += du(p, i);
          if (k == i) v += du(p, j);
          if (i == j) v -= du(p, k);
          gam(p, k, i, j) = v;
        }
  return gam;
}

UmbilicSolution UmbilicSolution::homogeneous(int n, double lambda0) {
  UmbilicSolution s;
  s.n = n;
  s.lambda0 = lambda0;
  s.dom = DomainSpec::homogeneous(n);
  s.g0 = Sym2Field(s.dom);
  for (int i = 0; i < n; ++i) s.g0(0, i, i) = 1.0;
  return s;
}

UmbilicSolution UmbilicSolution::patch(const DomainSpec& dom, double lambda0) {
  UmbilicSolution s;
  s.n = dom.n;
  s.lambda0 = lambda0;
  s.dom = dom;
  s.g0 = sample_ball_metric(dom, lambda0);
  return s;
}

double UmbilicSolution::lambda(double t) const { return lambda0 / std::sqrt(scale(t)); }

SpacelikeState UmbilicSolution::state(double t) const {
  SpacelikeState st;
  double c = scale(t);
  double hl = lambda0 * std::sqrt(c);  // lambda(t) * scale(t)
  st.g = Sym2Field(dom);
  st.h = Sym2Field(dom);
  st.t = t;
  for (int comp = 0; comp < st.g.ncomp(); ++comp)
    for (std::size_t p = 0; p < st.g.npoints(); ++p) {
      st.g.comp(comp)[p] = c * g0.comp(comp)[p];
      st.h.comp(comp)[p] = hl * g0.comp(comp)[p];
    }
  return st;
}

void UmbilicSolution::time_derivative(double t, Sym2Field& dg, Sym2Field& dh) const {
  double a = 2.0 * n * lambda0 * lambda0;
  double b = n * lambda0 * lambda0 * lambda0 / std::sqrt(scale(t));
  for (int comp = 0; comp < g0.ncomp(); ++comp)
    for (std::size_t p = 0; p < g0.npoints(); ++p) {
      dg.comp(comp)[p] = a * g0.comp(comp)[p];
      dh.comp(comp)[p] = b * g0.comp(comp)[p];
    }
}

namespace {

// C^3 window: cos^4(pi u / 2) on |u| < 1, zero outside.
double window(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  double c = std::cos(1.5707963267948966 * u);
  return c * c * c * c;
}

}  // namespace

Sym2Field seeded_perturbation(const DomainSpec& dom, double amplitude, std::uint64_t seed) {
  int n = dom.n;
  Sym2Field P(dom);
  if (amplitude == 0.0 || dom.kind == DomainKind::Homogeneous) return P;
  SplitMix64 rng(seed);
  int m2 = sym2_count(n);
  double x[kMaxDim];

  if (dom.kind == DomainKind::Torus) {
    // low-mode trig mix per component, sup bounded by amplitude
    std::vector<double> coef(static_cast<std::size_t>(m2) * n), phase(coef.size());
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i] = rng.symmetric();
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = 6.283185307179586 * rng.uniform();
    for (std::size_t p = 0; p < P.npoints(); ++p) {
      dom.point_coords(p, x);
      for (int c = 0; c < m2; ++c) {
        double v = 0.0;
        for (int a = 0; a < n; ++a) {
          double th = 6.283185307179586 * x[a] / dom.period(a);
          v += coef[c * n + a] * std::cos(th + phase[c * n + a]);
        }
        P.comp(c)[p] = amplitude * v / n;
      }
    }
    return P;
  }

  // Patch: one C^3 bump per component with a seeded linear modulation,
  // supported on |x_a| < half the box half-width: well clear of the boundary
  // stencils, and far enough that its parabolic influence on the boundary
  // stays exponentially small over short runs.
  std::vector<double> cmain(m2), clin(static_cast<std::size_t>(m2) * n);
  for (int c = 0; c < m2; ++c) cmain[c] = rng.symmetric();
  for (std::size_t i = 0; i < clin.size(); ++i) clin[i] = rng.symmetric();
  std::vector<double> b(n);
  for (int a = 0; a < n; ++a) b[a] = 0.5 * (-dom.origin[a]);
  for (std::size_t p = 0; p < P.npoints(); ++p) {
    dom.point_coords(p, x);
    double w = 1.0;
    for (int a = 0; a < n; ++a) w *= window(x[a] / b[a]);
    if (w == 0.0) continue;
    for (int c = 0; c < m2; ++c) {
      double mod = 1.0;
      for (int a = 0; a < n; ++a) mod += 0.5 * clin[c * n + a] * (x[a] / b[a]);
      P.comp(c)[p] = amplitude * cmain[c] * w * mod / (1.0 + 0.5 * n);
    }
  }
  return P;
}

SpacelikeState torus_random_state(const DomainSpec& dom, double amplitude, std::uint64_t seed) {
  int n = dom.n;
  SpacelikeState st;
  st.g = Sym2Field(dom);
  st.h = Sym2Field(dom);
  st.t = 0.0;
  SplitMix64 rng(seed);
  std::vector<double> ca(n), cb(n);
  for (int a = 0; a < n; ++a) ca[a] = rng.symmetric();
  for (int a = 0; a < n; ++a) cb[a] = rng.symmetric();
  double cd = rng.symmetric();
  // offsets quantized to 1/32 of the period: the same continuum seed at every
  // refinement level, with the pinching extremum on a node whenever the
  // per-axis count is a multiple of 32
  std::vector<double> off(n);
  for (int a = 0; a < n; ++a)
    off[a] = dom.period(a) * static_cast<double>(rng.next() % 32) / 32.0;

  double x[kMaxDim];
  for (std::size_t p = 0; p < st.g.npoints(); ++p) {
    dom.point_coords(p, x);
    double u = 0.0, diag = 1.0, mu_prod = 1.0;
    for (int a = 0; a < n; ++a) {
      double th = 6.283185307179586 * x[a] / dom.period(a);
      u += ca[a] * std::cos(th) + cb[a] * std::sin(th);
      diag *= std::cos(th);
      mu_prod *= std::cos(6.283185307179586 * (x[a] - off[a]) / dom.period(a));
    }
    u = amplitude * (u + cd * diag) / (2.0 * n + 1.0);
    double e2u = std::exp(2.0 * u);
    double mu = 2.5 + 1.5 * mu_prod;
    for (int i = 0; i < n; ++i) {
      st.g(p, i, i) = e2u;
      st.h(p, i, i) = (i == n - 1) ? e2u * mu : e2u;
    }
  }
  return st;
}

double convergence_order(const std::vector<std::pair<double, double>>& levels) {
  if (levels.size() < 3) throw InsufficientLevels();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [dx, e] : levels) {
    if (!(e > 0.0) || !(dx > 0.0)) throw InsufficientLevels();
    double X = std::log(dx), Y = std::log(e);
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
  }
  double m = static_cast<double>(levels.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double convention_self_test(int n) {
  // Exact dGamma assembly of the ball metric at off-axis sample points.
  const double pts[3][kMaxDim] = {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                                  {0.3, -0.2, 0.1, 0.05, -0.1, 0.2},
                                  {-0.15, 0.35, -0.25, 0.1, 0.2, -0.05}};
  double worst = 0.0;
  for (const double* x : pts) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    double f = 2.0 / (1.0 - r2);
    double w = f;  // du = w * x
    double u1[kMaxDim], u2[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i) u1[i] = w * x[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        u2[i][j] = (i == j ? w : 0.0) + w * w * x[i] * x[j];

    auto gam = [&](int k, int i, int j) {
      double v = 0.0;
      if (k == j) v += u1[i];
      if (k == i) v += u1[j];
      if (i == j) v -= u1[k];
      return v;
    };
    auto dgam = [&](int l, int k, int i, int j) {
      double v = 0.0;
      if (k == j) v += u2[i][l];
      if (k == i) v += u2[j][l];
      if (i == j) v -= u2[k][l];
      return v;
    };

    double R[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s)
        for (int m = 0; m < n; ++m)
          for (int nu = 0; nu < n; ++nu) {
            double v = dgam(m, r, nu, s) - dgam(nu, r, m, s);
            for (int l = 0; l < n; ++l)
              v += gam(r, m, l) * gam(l, nu, s) - gam(r, nu, l) * gam(l, m, s);
            R[r][s][m][nu] = v;
          }
    // lower first index with g = f^2 delta; anchor: R_ijkl = g_il g_jk - g_ik g_jl
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double lowered = f * f * R[i][j][k][l];
            double gik = (i == k) ? f * f : 0.0;
            double gil = (i == l) ? f * f : 0.0;
            double gjk = (j == k) ? f * f : 0.0;
            double gjl = (j == l) ? f * f : 0.0;
            double anchor = gil * gjk - gik * gjl;
            double d = std::abs(lowered - anchor) / (f * f * f * f);
            if (d > worst) worst = d;
          }
    // Ricci contraction R_ij = g^{kl} R_kilj must equal -(n-1) g_ij
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double ric = 0.0;
        for (int k = 0; k < n; ++k) ric += (1.0 / (f * f)) * (f * f * R[k][i][k][j]);
        double expect = -(n - 1.0) * ((i == j) ? f * f : 0.0);
        double d = std::abs(ric - expect) / (f * f);
        if (d > worst) worst = d;
      }
  }
  return worst;
}

}  // namespace imcf
