#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "imcf/state.hpp"

namespace imcf {

// Deterministic 64-bit stream; the only randomness source in the project.
struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0,1)
  double symmetric() { return 2.0 * uniform() - 1.0; }                        // [-1,1)
};

// Poincare ball metric g_ij = 4 delta_ij / (1-|x|^2)^2 (sectional curvature -1)
// at a single chart point. Throws OutsideChart for |x| >= 1.
void hyperbolic_ball_metric(int n, const double* x, double* g_packed);

// Ball metric sampled over a Patch domain, scaled to curvature -lambda0^2.
Sym2Field sample_ball_metric(const DomainSpec& dom, double lambda0);

// Closed-form Christoffel symbols of the ball metric on a Patch domain
// (scale-invariant, so independent of lambda0).
ChristoffelField ball_christoffel_closed(const DomainSpec& dom);

// Closed-form Christoffel of a conformally flat metric exp(2u) delta given u's
// coordinate gradient field: Gamma^k_ij = d_j u delta^k_i + d_i u delta^k_j
//                                        - delta_ij delta^{kl} d_l u.
ChristoffelField conformal_christoffel_closed(const VectorField& du);

// The umbilic family h = lambda(t) g(t): lambda(t) = lambda0/sqrt(1+2n lambda0^2 t),
// g(t) = (1+2n lambda0^2 t) g0, constant curvature -lambda(t)^2 throughout. On a
// Homogeneous domain g0 is the identity matrix; on a Patch it is the sampled
// ball metric with curvature -lambda0^2.
struct UmbilicSolution {
  int n = 4;
  double lambda0 = 1.0;
  DomainSpec dom;
  Sym2Field g0;

  static UmbilicSolution homogeneous(int n, double lambda0);
  static UmbilicSolution patch(const DomainSpec& dom, double lambda0);

  double scale(double t) const { return 1.0 + 2.0 * n * lambda0 * lambda0 * t; }
  double lambda(double t) const;
  SpacelikeState state(double t) const;
  // Exact time derivative (d g/dt, d h/dt) at time t.
  void time_derivative(double t, Sym2Field& dg, Sym2Field& dh) const;
};

// Seeded smooth perturbation field. Patch: windowed C^3 bump combination,
// zero within one stencil width of the boundary, sup-norm <= amplitude.
// Torus: low-mode trigonometric field, sup-norm <= amplitude. Deterministic
// in (seed); amplitude 0 gives the zero field.
Sym2Field seeded_perturbation(const DomainSpec& dom, double amplitude, std::uint64_t seed);

// Conformally flat random torus seed with exact pinching anchor: relative
// eigenvalues of h against g are (1,...,1, mu(x)) with mu in [1,4] and max 4
// attained at a grid node, so pinch_eps(0) = 1/(n+3) exactly (0.2 for n=2).
SpacelikeState torus_random_state(const DomainSpec& dom, double amplitude, std::uint64_t seed);

// Least-squares slope of log(e) against log(dx) over refinement levels.
// Throws InsufficientLevels for fewer than 3 levels or non-positive errors.
double convergence_order(const std::vector<std::pair<double, double>>& levels);

// Exact-derivative assembly of the ball-metric curvature at sample points;
// verifies the pinned sign conventions (Ric = -(n-1) g, Gauss anchor) to
// round-off. Returns the worst deviation found.
double convention_self_test(int n);

}  // namespace imcf
