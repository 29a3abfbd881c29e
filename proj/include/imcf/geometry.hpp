#pragma once

#include "imcf/domain.hpp"
#include "imcf/fields.hpp"

namespace imcf {

// Pointwise matrix inverse of an SPD metric. Throws NotPositiveDefinite.
Sym2Field inverse_metric(const Sym2Field& g);

// Pointwise sqrt(det g); throws NotPositiveDefinite.
ScalarField volume_element(const Sym2Field& g);

// Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelField christoffel(const Sym2Field& g, const Sym2Field& ginv);

struct RiemannReport {
  Riem4Field R;
  // Max |unsymmetrized - symmetrized| entry over the grid: how far the raw
  // dGamma assembly sits from the exact index symmetries before projection.
  double max_asymmetry = 0.0;
};

// Fully lowered R_ijkl from Gamma and its coordinate derivatives, projected
// onto the exact index symmetries after assembly. Sign convention is pinned by
// the constant-curvature anchor: h = g on the unit hyperboloid gives
// R_ijkl = h_il h_jk - h_ik h_jl (so Ric = -(n-1) g there).
RiemannReport riemann(const Sym2Field& g, const ChristoffelField& gam);

// R_ijkl = h_il h_jk - h_ik h_jl: the curvature a constraint-exact state
// carries. Satisfies all symmetries and the first Bianchi identity exactly.
Riem4Field riemann_from_gauss(const Sym2Field& h);

// Max over grid of |R_ijkl + R_iklj + R_iljk| (first Bianchi residual).
double first_bianchi_residual(const Riem4Field& R);

// R_ij = g^{kl} R_kilj.
Sym2Field ricci(const Riem4Field& R, const Sym2Field& ginv);
ScalarField scalar_curvature(const Sym2Field& ric, const Sym2Field& ginv);

// nabla_i T_jk = d_i T_jk - Gamma^l_ij T_lk - Gamma^l_ik T_jl.
Sym3Field covd_sym2(const Sym2Field& T, const ChristoffelField& gam);

// nabla_m S_ijk for S = covd of a Sym2 (symmetric in jk only).
Tensor4Field covd_sym3(const Sym3Field& S, const ChristoffelField& gam);

// (Lap T)_jk = g^{mi} (nabla nabla T)_{mi,jk}, assembled as two nested
// covariant derivatives.
Sym2Field rough_laplacian_sym2(const Sym2Field& T, const Sym2Field& ginv,
                               const ChristoffelField& gam);

// One axis of the laplacian assembly: lap_jk += g^{mi} nabla_m S_{i jk} with
// dS the coordinate derivative of S along axis m. Shared with the flow RHS.
void accumulate_laplacian_axis(const Sym3Field& S, const Sym3Field& dS, const Sym2Field& ginv,
                               const ChristoffelField& gam, int m, Sym2Field& lap);

// d_i f (coordinate gradient, lower index).
VectorField grad_scalar(const ScalarField& f);

// Lap f = g^{mn} (d_m d_n f - Gamma^l_mn d_l f), nested first derivatives.
ScalarField laplacian_scalar(const ScalarField& f, const Sym2Field& ginv,
                             const ChristoffelField& gam);

// Covariant derivative of a 1-form: (nabla w)_ij = d_i w_j - Gamma^l_ij w_l.
Tensor2Field covd_oneform(const VectorField& w, const ChristoffelField& gam);

// Covariant derivative of a vector: (nabla V)_i^j = d_i V^j + Gamma^j_il V^l.
Tensor2Field covd_vector(const VectorField& V, const ChristoffelField& gam);

// Grid integral of f against the metric volume element. Torus/Homogeneous sum
// all nodes; Patch uses trapezoidal weights and must be explicitly flagged as
// a boundary-open integral, otherwise ClosedIntegralOnPatch is thrown.
double integrate_scalar(const ScalarField& f, const Sym2Field& g, bool allow_open_patch = false);

// Pointwise squared norms, all indices contracted with ginv.
ScalarField sym2_norm2(const Sym2Field& T, const Sym2Field& ginv);
ScalarField sym3_norm2(const Sym3Field& S, const Sym2Field& ginv);
ScalarField tensor4_norm2(const Tensor4Field& U, const Sym2Field& ginv);
ScalarField riem4_norm2(const Riem4Field& R, const Sym2Field& ginv);

}  // namespace imcf
