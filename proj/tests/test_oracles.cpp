#include <doctest.h>

#include <cmath>

#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"
#include "imcf/oracles.hpp"

using namespace imcf;

TEST_CASE("umbilic closed form: lambda and metric scale") {
  UmbilicSolution sol = UmbilicSolution::homogeneous(4, 1.0);
  CHECK(sol.lambda(0.0) == 1.0);
  CHECK(sol.scale(1.0) == 9.0);
  CHECK(sol.lambda(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  SpacelikeState st = sol.state(1.0);
  CHECK(st.g(0, 0, 0) == 9.0);
  CHECK(st.h(0, 0, 0) == doctest::Approx(3.0).epsilon(1e-15));  // lambda * scale
  CHECK(st.h(0, 0, 1) == 0.0);

  // H(t) = n lambda(t) saturates the upper H envelope exactly
  for (double t : {0.0, 0.5, 2.0, 10.0}) {
    double H = 4.0 * sol.lambda(t);
    double env = 1.0 / std::sqrt((2.0 / 4.0) * t + 1.0 / 16.0);
    CHECK(H == doctest::Approx(env).epsilon(1e-14));
  }
}

TEST_CASE("ball metric at the origin is 4 identity") {
  double x[3] = {0.0, 0.0, 0.0};
  double gp[6];
  hyperbolic_ball_metric(3, x, gp);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) CHECK(gp[sym2_index(3, i, j)] == ((i == j) ? 4.0 : 0.0));

  double far[3] = {0.8, 0.6, 0.2};
  CHECK_THROWS_AS(hyperbolic_ball_metric(3, far, gp), OutsideChart);
}

TEST_CASE("seeded perturbation: determinism, zero amplitude, boundary clearance") {
  DomainSpec dom = DomainSpec::patch(2, 17, 0.45);
  Sym2Field a = seeded_perturbation(dom, 1e-3, 42);
  Sym2Field b = seeded_perturbation(dom, 1e-3, 42);
  CHECK(a.raw() == b.raw());

  Sym2Field c = seeded_perturbation(dom, 1e-3, 43);
  CHECK(a.raw() != c.raw());

  Sym2Field z = seeded_perturbation(dom, 0.0, 42);
  for (double v : z.raw()) CHECK(v == 0.0);

  // sup bounded by amplitude, and zero within one stencil width of boundary
  double sup = 0.0;
  for (double v : a.raw()) sup = std::max(sup, std::abs(v));
  CHECK(sup <= 1e-3);
  CHECK(sup > 0.0);
  for (int comp = 0; comp < a.ncomp(); ++comp)
    for (std::size_t p = 0; p < a.npoints(); ++p)
      if (dom.in_boundary_shell(p, 2)) CHECK(a.comp(comp)[p] == 0.0);
}

TEST_CASE("torus random seed: conformal g, pinching anchor on a node") {
  DomainSpec dom = DomainSpec::torus(2, 32, 1.0);
  SpacelikeState st = torus_random_state(dom, 0.15, 7);

  // g conformal to the identity, h diagonal with relative eigenvalues (1, mu)
  double mu_max = 0.0, mu_min = 1e300;
  for (std::size_t p = 0; p < st.g.npoints(); ++p) {
    CHECK(st.g(p, 0, 1) == 0.0);
    CHECK(st.g(p, 0, 0) == st.g(p, 1, 1));
    CHECK(st.h(p, 0, 0) == st.g(p, 0, 0));
    double mu = st.h(p, 1, 1) / st.g(p, 1, 1);
    mu_max = std::max(mu_max, mu);
    mu_min = std::min(mu_min, mu);
  }
  CHECK(mu_max == doctest::Approx(4.0).epsilon(1e-12));  // extremum sits on a node
  CHECK(mu_min >= 1.0 - 1e-12);

  SpacelikeState st2 = torus_random_state(dom, 0.15, 7);
  CHECK(st.g.raw() == st2.g.raw());
}

TEST_CASE("convergence_order fits the slope") {
  std::vector<std::pair<double, double>> quad, lin;
  for (double d : {0.1, 0.05, 0.025}) {
    quad.push_back({d, d * d});
    lin.push_back({d, 3.0 * d});
  }
  CHECK(convergence_order(quad) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(convergence_order(lin) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> two = {{0.1, 0.01}, {0.05, 0.0025}};
  CHECK_THROWS_AS((void)convergence_order(two), InsufficientLevels);
}

TEST_CASE("hyperboloid patch data satisfies constraints to O(dx^2)") {
  std::vector<std::pair<double, double>> levels;
  for (int N : {17, 33, 65}) {
    DomainSpec dom = DomainSpec::patch(2, N, 0.45);
    UmbilicSolution sol = UmbilicSolution::patch(dom, 1.0);
    SpacelikeState st = sol.state(0.0);
    Sym2Field ginv = inverse_metric(st.g);
    RiemannReport rep = riemann(st.g, christoffel(st.g, ginv));
    // Gauss residual sup over the fixed interior |x| <= 0.75 hw
    double worst = 0.0;
    double x[2];
    for (std::size_t p = 0; p < st.g.npoints(); ++p) {
      dom.point_coords(p, x);
      if (std::max(std::abs(x[0]), std::abs(x[1])) > 0.75 * 0.45) continue;
      double G = rep.R(p, 0, 1, 0, 1) -
                 (st.h(p, 0, 1) * st.h(p, 1, 0) - st.h(p, 0, 0) * st.h(p, 1, 1));
      worst = std::max(worst, std::abs(G));
    }
    levels.push_back({dom.spacing[0], worst});
  }
  CHECK(convergence_order(levels) >= 1.9);
}
