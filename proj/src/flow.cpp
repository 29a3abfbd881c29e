#include "imcf/flow.hpp"

#include <cmath>

#include "imcf/errors.hpp"
#include "imcf/smallmat.hpp"
#include "imcf/stencil.hpp"

namespace imcf {

CurvatureBundle curvature_bundle(const Sym2Field& g, const Sym2Field& h) {
  CurvatureBundle b;
  b.ginv = inverse_metric(g);
  if (g.dom().kind == DomainKind::Homogeneous) {
    b.gam = ChristoffelField(g.dom());
    b.R = riemann_from_gauss(h);
  } else {
    b.gam = christoffel(g, b.ginv);
    RiemannReport rep = riemann(g, b.gam);
    b.R = std::move(rep.R);
    b.riemann_asymmetry = rep.max_asymmetry;
  }
  b.ric = ricci(b.R, b.ginv);
  return b;
}

ScalarField mean_curvature(const Sym2Field& h, const Sym2Field& ginv) {
  const DomainSpec& dom = h.dom();
  int n = dom.n;
  ScalarField H(dom);
  for (std::size_t p = 0; p < h.npoints(); ++p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ginv(p, i, j) * h(p, i, j);
    H(p) = s;
  }
  return H;
}

ScalarField norm_A2(const Sym2Field& h, const Sym2Field& ginv) { return sym2_norm2(h, ginv); }

ScalarField mean_curvature(const SpacelikeState& st) {
  return mean_curvature(st.h, inverse_metric(st.g));
}
ScalarField norm_A2(const SpacelikeState& st) { return norm_A2(st.h, inverse_metric(st.g)); }

namespace {

// Shared assembly: given the bundle and h, produce the raw RHS and hand back
// the covariant derivative of h for reuse by the gauge terms.
FlowRhs raw_core(const CurvatureBundle& b, const Sym2Field& h, Sym3Field* covd_h_out) {
  const DomainSpec& dom = h.dom();
  int n = dom.n;
  FlowRhs r{Sym2Field(dom), Sym2Field(dom)};

  Sym2Field lap(dom);
  if (dom.kind != DomainKind::Homogeneous) {
    Sym3Field S = covd_sym2(h, b.gam);
    Sym3Field dS(dom);
    for (int m = 0; m < n; ++m) {
      derivative_all(S, m, dS);
      accumulate_laplacian_axis(S, dS, b.ginv, b.gam, m, lap);
    }
    if (covd_h_out) *covd_h_out = std::move(S);
  } else if (covd_h_out) {
    *covd_h_out = Sym3Field(dom);
  }

  double hp[kMaxDim][kMaxDim], gi[kMaxDim][kMaxDim], rc[kMaxDim][kMaxDim];
  double hud[kMaxDim][kMaxDim], rud[kMaxDim][kMaxDim];
  for (std::size_t p = 0; p < h.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int c = sym2_index(n, i, j);
        hp[i][j] = hp[j][i] = h.comp(c)[p];
        gi[i][j] = gi[j][i] = b.ginv.comp(c)[p];
        rc[i][j] = rc[j][i] = b.ric.comp(c)[p];
      }
    // raised-index helpers h_i^k and R_i^k
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double sh = 0.0, sr = 0.0;
        for (int m = 0; m < n; ++m) {
          sh += hp[i][m] * gi[m][k];
          sr += rc[i][m] * gi[m][k];
        }
        hud[i][k] = sh;
        rud[i][k] = sr;
      }
    double A2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) A2 += hud[i][k] * hud[k][i];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double h2 = 0.0, h3 = 0.0, rh = 0.0;
        for (int k = 0; k < n; ++k) {
          h2 += hud[i][k] * hp[k][j];
          rh += rud[i][k] * hp[k][j] + rud[j][k] * hp[k][i];
          double h2kj = 0.0;
          for (int l = 0; l < n; ++l) h2kj += hud[k][l] * hp[l][j];
          h3 += hud[i][k] * h2kj;
        }
        r.dg(p, i, j) = -2.0 * rc[i][j] + 2.0 * h2;
        r.dh(p, i, j) = lap(p, i, j) - rh + 2.0 * h3 - A2 * hp[i][j];
      }
  }
  return r;
}

}  // namespace

FlowRhs rhs_raw(const SpacelikeState& st) {
  CurvatureBundle b = curvature_bundle(st.g, st.h);
  return raw_core(b, st.h, nullptr);
}

FlowRhs rhs_simplified(const SpacelikeState& st) {
  const DomainSpec& dom = st.dom();
  int n = dom.n;
  Sym2Field ginv = inverse_metric(st.g);
  FlowRhs r{Sym2Field(dom), Sym2Field(dom)};

  Sym2Field lap(dom);
  if (dom.kind != DomainKind::Homogeneous) {
    ChristoffelField gam = christoffel(st.g, ginv);
    lap = rough_laplacian_sym2(st.h, ginv, gam);
  }
  double hud[kMaxDim][kMaxDim];
  for (std::size_t p = 0; p < st.h.npoints(); ++p) {
    double H = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += st.h(p, i, m) * ginv(p, m, k);
        hud[i][k] = s;
      }
    for (int i = 0; i < n; ++i) H += hud[i][i];
    double A2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) A2 += hud[i][k] * hud[k][i];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double h2 = 0.0;
        for (int k = 0; k < n; ++k) h2 += hud[i][k] * st.h(p, k, j);
        r.dg(p, i, j) = 2.0 * H * st.h(p, i, j);
        r.dh(p, i, j) = lap(p, i, j) + 2.0 * H * h2 - A2 * st.h(p, i, j);
      }
  }
  return r;
}

GaugeBackground GaugeBackground::from_metric(const Sym2Field& s) {
  GaugeBackground bg;
  bg.s = s;
  bg.gamma_s = christoffel(s, inverse_metric(s));
  return bg;
}

VectorField deturck_vector(const Sym2Field& ginv_hat, const ChristoffelField& gamma_hat,
                           const ChristoffelField& gamma_s) {
  const DomainSpec& dom = ginv_hat.dom();
  int n = dom.n;
  VectorField V(dom);
  for (std::size_t p = 0; p < V.npoints(); ++p)
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          s += ginv_hat(p, b, c) * (gamma_hat(p, a, b, c) - gamma_s(p, a, b, c));
      V(p, a) = s;
    }
  return V;
}

VectorField deturck_vector(const Sym2Field& ghat, const Sym2Field& s) {
  Sym2Field ginv = inverse_metric(ghat);
  ChristoffelField gh = christoffel(ghat, ginv);
  ChristoffelField gs = christoffel(s, inverse_metric(s));
  return deturck_vector(ginv, gh, gs);
}

FlowRhs rhs_gauge_fixed(const SpacelikeState& hatted, const GaugeBackground& bg) {
  const DomainSpec& dom = hatted.dom();
  int n = dom.n;
  CurvatureBundle b = curvature_bundle(hatted.g, hatted.h);
  Sym3Field covd_h;
  FlowRhs r = raw_core(b, hatted.h, &covd_h);

  VectorField V = deturck_vector(b.ginv, b.gam, bg.gamma_s);
  VectorField Vlow(dom);
  for (std::size_t p = 0; p < V.npoints(); ++p)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += hatted.g(p, i, a) * V(p, a);
      Vlow(p, i) = s;
    }
  Tensor2Field gradVlow = covd_oneform(Vlow, b.gam);
  Tensor2Field gradVup = covd_vector(V, b.gam);

  for (std::size_t p = 0; p < V.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        r.dg(p, i, j) += gradVlow(p, i, j) + gradVlow(p, j, i);
        double s = 0.0;
        for (int c = 0; c < n; ++c) {
          s += V(p, c) * covd_h(p, c, i, j);
          s += hatted.h(p, j, c) * gradVup(p, i, c) + hatted.h(p, i, c) * gradVup(p, j, c);
        }
        r.dh(p, i, j) += s;
      }
  return r;
}

double interpolate(const FieldBase& f, int c, const double* y, std::size_t owner) {
  const DomainSpec& dom = f.dom();
  int d = dom.naxes();
  const double* slab = f.comp(c);

  if (dom.interp_order == 3) {
    // separable 3-point Lagrange (quadratic): per axis, nodes k-1, k, k+1
    // around the nearest node; window shifted inward at patch edges
    int kc[kMaxDim];
    double w[kMaxDim][3];
    for (int a = 0; a < d; ++a) {
      double u = (y[a] - dom.origin[a]) / dom.spacing[a];
      int N = dom.shape[a];
      if (dom.kind == DomainKind::Torus) {
        u -= std::floor(u / N) * N;
      } else {
        if (u < -1.0 || u > static_cast<double>(N)) throw MapLeftDomain(owner);
        if (u < 0.0) u = 0.0;
        if (u > N - 1.0) u = N - 1.0;
      }
      int k = static_cast<int>(std::lround(u));
      if (dom.kind != DomainKind::Torus) {
        if (k < 1) k = 1;
        if (k > N - 2) k = N - 2;
      }
      double s = u - k;
      kc[a] = k;
      w[a][0] = 0.5 * s * (s - 1.0);
      w[a][1] = 1.0 - s * s;
      w[a][2] = 0.5 * s * (s + 1.0);
    }
    double acc = 0.0;
    int total = 1;
    for (int a = 0; a < d; ++a) total *= 3;
    for (int node = 0; node < total; ++node) {
      double wt = 1.0;
      std::size_t idx = 0;
      int rem = node;
      for (int a = 0; a < d; ++a) {
        int off = rem % 3;
        rem /= 3;
        wt *= w[a][off];
        int N = dom.shape[a];
        int i = kc[a] + off - 1;
        if (dom.kind == DomainKind::Torus) i = (i % N + N) % N;
        idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(i);
      }
      acc += wt * slab[idx];
    }
    return acc;
  }

  int i0[kMaxDim], i1[kMaxDim];
  double w1[kMaxDim];
  for (int a = 0; a < d; ++a) {
    double u = (y[a] - dom.origin[a]) / dom.spacing[a];
    int N = dom.shape[a];
    if (dom.kind == DomainKind::Torus) {
      u -= std::floor(u / N) * N;  // wrap into [0, N)
      int k = static_cast<int>(std::floor(u));
      if (k >= N) k = N - 1;
      i0[a] = k;
      i1[a] = (k + 1) % N;
      w1[a] = u - k;
    } else {
      if (u < -1.0 || u > static_cast<double>(N)) throw MapLeftDomain(owner);
      if (u < 0.0) u = 0.0;
      if (u > N - 1.0) u = N - 1.0;
      int k = static_cast<int>(std::floor(u));
      if (k > N - 2) k = N - 2;
      i0[a] = k;
      i1[a] = k + 1;
      w1[a] = u - k;
    }
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      bool hi = corner & (1 << a);
      w *= hi ? w1[a] : (1.0 - w1[a]);
      idx = idx * static_cast<std::size_t>(dom.shape[a]) +
            static_cast<std::size_t>(hi ? i1[a] : i0[a]);
    }
    acc += w * slab[idx];
  }
  return acc;
}

VectorField advance_diffeo(const VectorField& F, const std::function<VectorField(double)>& V_of_t,
                           double t0, double t1, int substeps) {
  const DomainSpec& dom = F.dom();
  int n = dom.n;
  VectorField cur = F;
  double hstep = (t1 - t0) / substeps;
  double y[kMaxDim], k1[kMaxDim], k2[kMaxDim], k3[kMaxDim], k4[kMaxDim], tmp[kMaxDim];
  for (int s = 0; s < substeps; ++s) {
    double ta = t0 + s * hstep;
    VectorField Va = V_of_t(ta);
    VectorField Vm = V_of_t(ta + 0.5 * hstep);
    VectorField Vb = V_of_t(ta + hstep);
    VectorField next = cur;
    for (std::size_t p = 0; p < cur.npoints(); ++p) {
      for (int a = 0; a < n; ++a) y[a] = cur(p, a);
      for (int a = 0; a < n; ++a) k1[a] = -interpolate(Va, a, y, p);
      for (int a = 0; a < n; ++a) tmp[a] = y[a] + 0.5 * hstep * k1[a];
      for (int a = 0; a < n; ++a) k2[a] = -interpolate(Vm, a, tmp, p);
      for (int a = 0; a < n; ++a) tmp[a] = y[a] + 0.5 * hstep * k2[a];
      for (int a = 0; a < n; ++a) k3[a] = -interpolate(Vm, a, tmp, p);
      for (int a = 0; a < n; ++a) tmp[a] = y[a] + hstep * k3[a];
      for (int a = 0; a < n; ++a) k4[a] = -interpolate(Vb, a, tmp, p);
      for (int a = 0; a < n; ++a)
        next(p, a) = y[a] + (hstep / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
    }
    cur = std::move(next);
  }
  return cur;
}

std::pair<Sym2Field, Sym2Field> pullback_state(const VectorField& F, const Sym2Field& ghat,
                                               const Sym2Field& hhat) {
  const DomainSpec& dom = F.dom();
  int n = dom.n;
  std::vector<VectorField> dF;
  dF.reserve(n);
  if (dom.kind == DomainKind::Torus) {
    // differentiate the periodic displacement, then add the identity part
    VectorField disp(dom);
    double x[kMaxDim];
    for (std::size_t p = 0; p < F.npoints(); ++p) {
      dom.point_coords(p, x);
      for (int a = 0; a < n; ++a) {
        double L = dom.period(a);
        double v = F(p, a) - x[a];
        v -= std::floor(v / L + 0.5) * L;  // wrap into [-L/2, L/2)
        disp(p, a) = v;
      }
    }
    for (int a = 0; a < n; ++a) {
      dF.emplace_back(dom);
      derivative_all(disp, a, dF.back());
      for (std::size_t p = 0; p < F.npoints(); ++p) dF.back()(p, a) += 1.0;
    }
  } else {
    for (int a = 0; a < n; ++a) {
      dF.emplace_back(dom);
      derivative_all(F, a, dF.back());
    }
  }

  Sym2Field g(dom), h(dom);
  int m2 = sym2_count(n);
  double y[kMaxDim], gs[sym2_count(kMaxDim)], hs[sym2_count(kMaxDim)];
  for (std::size_t p = 0; p < F.npoints(); ++p) {
    for (int a = 0; a < n; ++a) y[a] = F(p, a);
    for (int c = 0; c < m2; ++c) {
      gs[c] = interpolate(ghat, c, y, p);
      hs[c] = interpolate(hhat, c, y, p);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sg = 0.0, sh = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double w = dF[i](p, a) * dF[j](p, b);
            sg += w * gs[sym2_index(n, a, b)];
            sh += w * hs[sym2_index(n, a, b)];
          }
        g(p, i, j) = sg;
        h(p, i, j) = sh;
      }
  }
  return {std::move(g), std::move(h)};
}

}  // namespace imcf
