#include "imcf/geometry.hpp"

#include <cmath>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/smallmat.hpp"
#include "imcf/stencil.hpp"

namespace imcf {

Sym2Field inverse_metric(const Sym2Field& g) {
  const DomainSpec& dom = g.dom();
  int n = dom.n;
  Sym2Field inv(dom);
  int m2 = sym2_count(n);
  std::vector<const double*> gs(m2);
  std::vector<double*> is(m2);
  for (int c = 0; c < m2; ++c) { gs[c] = g.comp(c); is[c] = inv.comp(c); }
  double a[sym2_count(kMaxDim)], L[kMaxDim * kMaxDim], ip[sym2_count(kMaxDim)];
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    for (int c = 0; c < m2; ++c) a[c] = gs[c][p];
    if (!chol_packed(n, a, L)) throw NotPositiveDefinite(p);
    inverse_from_chol(n, L, ip);
    for (int c = 0; c < m2; ++c) is[c][p] = ip[c];
  }
  return inv;
}

ScalarField volume_element(const Sym2Field& g) {
  const DomainSpec& dom = g.dom();
  int n = dom.n;
  ScalarField out(dom);
  int m2 = sym2_count(n);
  double a[sym2_count(kMaxDim)], L[kMaxDim * kMaxDim];
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    for (int c = 0; c < m2; ++c) a[c] = g.comp(c)[p];
    if (!chol_packed(n, a, L)) throw NotPositiveDefinite(p);
    double d = 1.0;
    for (int i = 0; i < n; ++i) d *= L[i * n + i];
    out(p) = d;  // sqrt(det g) = prod of Cholesky diagonals
  }
  return out;
}

ChristoffelField christoffel(const Sym2Field& g, const Sym2Field& ginv) {
  const DomainSpec& dom = g.dom();
  int n = dom.n;
  ChristoffelField gam(dom);
  if (dom.kind == DomainKind::Homogeneous) return gam;

  std::vector<Sym2Field> dg;
  dg.reserve(n);
  for (int a = 0; a < n; ++a) {
    dg.emplace_back(dom);
    derivative_all(g, a, dg.back());
  }
  // per-point gather to dense stack arrays: the contraction loops then run on
  // registers/L1 instead of strided slab loads
  double gi[kMaxDim][kMaxDim], dgl[kMaxDim][kMaxDim][kMaxDim];
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int c = sym2_index(n, i, j);
        gi[i][j] = gi[j][i] = ginv.comp(c)[p];
        for (int a = 0; a < n; ++a) dgl[a][i][j] = dgl[a][j][i] = dg[a].comp(c)[p];
      }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += gi[k][l] * (dgl[i][j][l] + dgl[j][i][l] - dgl[l][i][j]);
          gam(p, k, i, j) = 0.5 * s;
        }
  }
  return gam;
}

RiemannReport riemann(const Sym2Field& g, const ChristoffelField& gam) {
  const DomainSpec& dom = g.dom();
  int n = dom.n;
  RiemannReport rep;
  rep.R = Riem4Field(dom);
  if (dom.kind == DomainKind::Homogeneous) return rep;  // dGamma = 0, Gamma = 0

  std::vector<ChristoffelField> dgam;
  dgam.reserve(n);
  for (int a = 0; a < n; ++a) {
    dgam.emplace_back(dom);
    derivative_all(gam, a, dgam.back());
  }

  double Rup[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  double Rlo[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  double Ras[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  double gp[kMaxDim][kMaxDim], ga[kMaxDim][kMaxDim][kMaxDim];
  double dga[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  int m2 = sym2_count(n);
  double max_asym = 0.0;
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int c = sym2_index(n, i, j);
        gp[i][j] = gp[j][i] = g.comp(c)[p];
        for (int k = 0; k < n; ++k) {
          double v = gam.comp(k * m2 + c)[p];
          ga[k][i][j] = ga[k][j][i] = v;
          for (int a = 0; a < n; ++a) {
            double w = dgam[a].comp(k * m2 + c)[p];
            dga[a][k][i][j] = dga[a][k][j][i] = w;
          }
        }
      }
    // R^r_smn = d_m Gamma^r_ns - d_n Gamma^r_ms + Gamma^r_ml Gamma^l_ns - Gamma^r_nl Gamma^l_ms
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s)
        for (int m = 0; m < n; ++m) {
          Rup[r][s][m][m] = 0.0;
          for (int nu = m + 1; nu < n; ++nu) {
            double v = dga[m][r][nu][s] - dga[nu][r][m][s];
            for (int l = 0; l < n; ++l)
              v += ga[r][m][l] * ga[l][nu][s] - ga[r][nu][l] * ga[l][m][s];
            Rup[r][s][m][nu] = v;
            Rup[r][s][nu][m] = -v;
          }
        }
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s)
        for (int m = 0; m < n; ++m)
          for (int nu = 0; nu < n; ++nu) {
            double v = 0.0;
            for (int l = 0; l < n; ++l) v += gp[i][l] * Rup[l][s][m][nu];
            Rlo[i][s][m][nu] = v;
          }
    // project onto antisymmetry in (ij): Rlo is already antisymmetric in (kl)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            Ras[i][j][k][l] = 0.5 * (Rlo[i][j][k][l] - Rlo[j][i][k][l]);
    // pair-exchange symmetrization, packed store, asymmetry bookkeeping
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            int a = pair_index(n, i, j), b = pair_index(n, k, l);
            if (a > b) continue;
            double v = 0.5 * (Ras[i][j][k][l] + Ras[k][l][i][j]);
            rep.R.packed(p, a, b) = v;
            double d1 = std::abs(Rlo[i][j][k][l] - v);
            double d2 = std::abs(Rlo[k][l][i][j] - v);
            if (d1 > max_asym) max_asym = d1;
            if (d2 > max_asym) max_asym = d2;
          }
  }
  rep.max_asymmetry = max_asym;
  return rep;
}

Riem4Field riemann_from_gauss(const Sym2Field& h) {
  const DomainSpec& dom = h.dom();
  int n = dom.n;
  Riem4Field R(dom);
  for (std::size_t p = 0; p < h.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            int a = pair_index(n, i, j), b = pair_index(n, k, l);
            if (a > b) continue;
            R.packed(p, a, b) = h(p, i, l) * h(p, j, k) - h(p, i, k) * h(p, j, l);
          }
  return R;
}

double first_bianchi_residual(const Riem4Field& R) {
  int n = R.dom().n;
  double worst = 0.0;
  for (std::size_t p = 0; p < R.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = std::abs(R(p, i, j, k, l) + R(p, i, k, l, j) + R(p, i, l, j, k));
            if (v > worst) worst = v;
          }
  return worst;
}

Sym2Field ricci(const Riem4Field& R, const Sym2Field& ginv) {
  const DomainSpec& dom = R.dom();
  int n = dom.n;
  Sym2Field ric(dom);
  for (std::size_t p = 0; p < R.npoints(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += ginv(p, k, l) * R(p, k, i, l, j);
        ric(p, i, j) = s;
      }
  return ric;
}

ScalarField scalar_curvature(const Sym2Field& ric, const Sym2Field& ginv) {
  const DomainSpec& dom = ric.dom();
  int n = dom.n;
  ScalarField out(dom);
  for (std::size_t p = 0; p < ric.npoints(); ++p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += ginv(p, i, j) * ric(p, i, j);
    out(p) = s;
  }
  return out;
}

Sym3Field covd_sym2(const Sym2Field& T, const ChristoffelField& gam) {
  const DomainSpec& dom = T.dom();
  int n = dom.n;
  int m2 = sym2_count(n);
  Sym3Field S(dom);
  if (dom.kind == DomainKind::Homogeneous) return S;
  Sym2Field dT(dom);
  double tp[kMaxDim][kMaxDim], ga[kMaxDim][kMaxDim];
  for (int a = 0; a < n; ++a) {
    derivative_all(T, a, dT);
    for (std::size_t p = 0; p < T.npoints(); ++p) {
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) tp[j][k] = tp[k][j] = T.comp(sym2_index(n, j, k))[p];
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) ga[l][j] = gam.comp(l * m2 + sym2_index(n, a, j))[p];
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = dT(p, j, k);
          for (int l = 0; l < n; ++l) s -= ga[l][j] * tp[l][k] + ga[l][k] * tp[j][l];
          S(p, a, j, k) = s;
        }
    }
  }
  return S;
}

Tensor4Field covd_sym3(const Sym3Field& S, const ChristoffelField& gam) {
  const DomainSpec& dom = S.dom();
  int n = dom.n;
  Tensor4Field U(dom);
  if (dom.kind == DomainKind::Homogeneous) return U;
  Sym3Field dS(dom);
  for (int m = 0; m < n; ++m) {
    derivative_all(S, m, dS);
    for (std::size_t p = 0; p < S.npoints(); ++p)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = j; k < n; ++k) {
            double s = dS(p, i, j, k);
            for (int l = 0; l < n; ++l)
              s -= gam(p, l, m, i) * S(p, l, j, k) + gam(p, l, m, j) * S(p, i, l, k) +
                   gam(p, l, m, k) * S(p, i, j, l);
            U(p, m, i, j, k) = s;
          }
  }
  return U;
}

// Shared inner loop: accumulates g^{mi} nabla_m S_{i jk} into lap for one
// derivative axis m, with all per-point values gathered to dense stack arrays.
void accumulate_laplacian_axis(const Sym3Field& S, const Sym3Field& dS, const Sym2Field& ginv,
                               const ChristoffelField& gam, int m, Sym2Field& lap) {
  const DomainSpec& dom = S.dom();
  int n = dom.n;
  int m2 = sym2_count(n);
  double sp[kMaxDim][kMaxDim][kMaxDim], dsp[kMaxDim][kMaxDim][kMaxDim];
  double gm[kMaxDim][kMaxDim];  // Gamma^l_{m i} for the fixed axis m
  double gi[kMaxDim];           // g^{m i}
  for (std::size_t p = 0; p < S.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          int c = i * m2 + sym2_index(n, j, k);
          sp[i][j][k] = sp[i][k][j] = S.comp(c)[p];
          dsp[i][j][k] = dsp[i][k][j] = dS.comp(c)[p];
        }
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) gm[l][i] = gam.comp(l * m2 + sym2_index(n, m, i))[p];
    for (int i = 0; i < n; ++i) gi[i] = ginv.comp(sym2_index(n, m, i))[p];

    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          double s = dsp[i][j][k];
          for (int l = 0; l < n; ++l)
            s -= gm[l][i] * sp[l][j][k] + gm[l][j] * sp[i][l][k] + gm[l][k] * sp[i][j][l];
          acc += gi[i] * s;
        }
        lap(p, j, k) += acc;
      }
  }
}

Sym2Field rough_laplacian_sym2(const Sym2Field& T, const Sym2Field& ginv,
                               const ChristoffelField& gam) {
  const DomainSpec& dom = T.dom();
  int n = dom.n;
  Sym2Field lap(dom);
  if (dom.kind == DomainKind::Homogeneous) return lap;
  Sym3Field S = covd_sym2(T, gam);
  Sym3Field dS(dom);
  for (int m = 0; m < n; ++m) {
    derivative_all(S, m, dS);
    accumulate_laplacian_axis(S, dS, ginv, gam, m, lap);
  }
  return lap;
}

VectorField grad_scalar(const ScalarField& f) {
  const DomainSpec& dom = f.dom();
  VectorField w(dom);
  if (dom.kind == DomainKind::Homogeneous) return w;
  for (int a = 0; a < dom.n; ++a) axis_derivative(dom, a, f.comp(0), w.comp(a));
  return w;
}

ScalarField laplacian_scalar(const ScalarField& f, const Sym2Field& ginv,
                             const ChristoffelField& gam) {
  const DomainSpec& dom = f.dom();
  int n = dom.n;
  ScalarField lap(dom);
  if (dom.kind == DomainKind::Homogeneous) return lap;
  VectorField w = grad_scalar(f);
  ScalarField dw(dom);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a) {
      axis_derivative(dom, m, w.comp(a), dw.comp(0));
      for (std::size_t p = 0; p < f.npoints(); ++p) lap(p) += ginv(p, m, a) * dw(p);
    }
  for (std::size_t p = 0; p < f.npoints(); ++p) {
    double s = 0.0;
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a) {
        double gml = 0.0;
        for (int l = 0; l < n; ++l) gml += gam(p, l, m, a) * w(p, l);
        s += ginv(p, m, a) * gml;
      }
    lap(p) -= s;
  }
  return lap;
}

Tensor2Field covd_oneform(const VectorField& w, const ChristoffelField& gam) {
  const DomainSpec& dom = w.dom();
  int n = dom.n;
  Tensor2Field out(dom);
  if (dom.kind == DomainKind::Homogeneous) return out;
  ScalarField dw(dom);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      axis_derivative(dom, i, w.comp(j), dw.comp(0));
      for (std::size_t p = 0; p < w.npoints(); ++p) {
        double s = dw(p);
        for (int l = 0; l < n; ++l) s -= gam(p, l, i, j) * w(p, l);
        out(p, i, j) = s;
      }
    }
  return out;
}

Tensor2Field covd_vector(const VectorField& V, const ChristoffelField& gam) {
  const DomainSpec& dom = V.dom();
  int n = dom.n;
  Tensor2Field out(dom);
  if (dom.kind == DomainKind::Homogeneous) return out;
  ScalarField dv(dom);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      axis_derivative(dom, i, V.comp(j), dv.comp(0));
      for (std::size_t p = 0; p < V.npoints(); ++p) {
        double s = dv(p);
        for (int l = 0; l < n; ++l) s += gam(p, j, i, l) * V(p, l);
        out(p, i, j) = s;
      }
    }
  return out;
}

double integrate_scalar(const ScalarField& f, const Sym2Field& g, bool allow_open_patch) {
  const DomainSpec& dom = f.dom();
  if (dom.kind == DomainKind::Patch && !allow_open_patch) throw ClosedIntegralOnPatch();
  ScalarField mu = volume_element(g);
  double cell = 1.0;
  for (int a = 0; a < dom.naxes(); ++a) cell *= dom.spacing[a];
  double sum = 0.0;
  if (dom.kind == DomainKind::Patch) {
    for (std::size_t p = 0; p < f.npoints(); ++p) {
      double w = 1.0;
      std::size_t q = p;
      for (int a = dom.naxes() - 1; a >= 0; --a) {
        std::size_t sa = static_cast<std::size_t>(dom.shape[a]);
        std::size_t i = q % sa;
        if (i == 0 || i + 1 == sa) w *= 0.5;
        q /= sa;
      }
      sum += w * f(p) * mu(p);
    }
  } else {
    for (std::size_t p = 0; p < f.npoints(); ++p) sum += f(p) * mu(p);
  }
  return sum * cell;
}

ScalarField sym2_norm2(const Sym2Field& T, const Sym2Field& ginv) {
  const DomainSpec& dom = T.dom();
  int n = dom.n;
  ScalarField out(dom);
  double up[kMaxDim][kMaxDim];
  for (std::size_t p = 0; p < T.npoints(); ++p) {
    // T^i_j = g^{ik} T_kj, |T|^2 = T^i_j T^j_i
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += ginv(p, i, k) * T(p, k, j);
        up[i][j] = s;
      }
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v += up[i][j] * up[j][i];
    out(p) = v;
  }
  return out;
}

namespace {

// Raises one slot of a dense rank-r tensor (length n^r) in place via scratch.
// slot stride pattern: values laid out row-major, slot s has stride n^(r-1-s).
void raise_slot(int n, int rank, int slot, const double* ginv_packed, const double* in,
                double* out) {
  std::size_t total = 1;
  for (int r = 0; r < rank; ++r) total *= static_cast<std::size_t>(n);
  std::size_t stride = 1;
  for (int r = slot + 1; r < rank; ++r) stride *= static_cast<std::size_t>(n);
  std::size_t outer = total / (stride * static_cast<std::size_t>(n));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t r = 0; r < stride; ++r) {
      std::size_t base = o * stride * n + r;
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          s += ginv_packed[sym2_index(n, i, a)] * in[base + static_cast<std::size_t>(a) * stride];
        out[base + static_cast<std::size_t>(i) * stride] = s;
      }
    }
}

}  // namespace

ScalarField sym3_norm2(const Sym3Field& S, const Sym2Field& ginv) {
  const DomainSpec& dom = S.dom();
  int n = dom.n;
  ScalarField out(dom);
  double lo[kMaxDim * kMaxDim * kMaxDim], up[kMaxDim * kMaxDim * kMaxDim];
  double gp[sym2_count(kMaxDim)];
  for (std::size_t p = 0; p < S.npoints(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) gp[sym2_index(n, i, j)] = ginv(p, i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) lo[(i * n + j) * n + k] = S(p, i, j, k);
    raise_slot(n, 3, 0, gp, lo, up);
    raise_slot(n, 3, 1, gp, up, lo);  // lo now holds two slots raised
    raise_slot(n, 3, 2, gp, lo, up);
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v += up[(i * n + j) * n + k] * S(p, i, j, k);
    out(p) = v;
  }
  return out;
}

namespace {

template <class Get>
ScalarField rank4_norm2_impl(const DomainSpec& dom, std::size_t npts, const Sym2Field& ginv,
                             Get get) {
  int n = dom.n;
  ScalarField out(dom);
  std::vector<double> lo(static_cast<std::size_t>(n) * n * n * n);
  std::vector<double> up(lo.size());
  double gp[sym2_count(kMaxDim)];
  for (std::size_t p = 0; p < npts; ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) gp[sym2_index(n, i, j)] = ginv(p, i, j);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            lo[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] = get(p, a, b, c, d);
    raise_slot(n, 4, 0, gp, lo.data(), up.data());
    raise_slot(n, 4, 1, gp, up.data(), lo.data());
    raise_slot(n, 4, 2, gp, lo.data(), up.data());
    raise_slot(n, 4, 3, gp, up.data(), lo.data());
    double v = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            v += lo[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] * get(p, a, b, c, d);
    out(p) = v;
  }
  return out;
}

}  // namespace

ScalarField tensor4_norm2(const Tensor4Field& U, const Sym2Field& ginv) {
  return rank4_norm2_impl(U.dom(), U.npoints(), ginv,
                          [&U](std::size_t p, int a, int b, int c, int d) {
                            return U(p, a, b, c, d);
                          });
}

ScalarField riem4_norm2(const Riem4Field& R, const Sym2Field& ginv) {
  return rank4_norm2_impl(R.dom(), R.npoints(), ginv,
                          [&R](std::size_t p, int a, int b, int c, int d) {
                            return R(p, a, b, c, d);
                          });
}

}  // namespace imcf
