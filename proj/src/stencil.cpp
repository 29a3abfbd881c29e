#include "imcf/stencil.hpp"

#include <cstring>

namespace imcf {

namespace {

// One gridline: N samples at stride st starting at base.
struct Line {
  const double* in;
  double* out;
  std::size_t base, st;
  double v(int k) const { return in[base + static_cast<std::size_t>(k) * st]; }
  double& o(int k) const { return out[base + static_cast<std::size_t>(k) * st]; }
};

void line_torus2(const Line& ln, int N, double inv2dx) {
  ln.o(0) = (ln.v(1) - ln.v(N - 1)) * inv2dx;
  for (int k = 1; k < N - 1; ++k) ln.o(k) = (ln.v(k + 1) - ln.v(k - 1)) * inv2dx;
  ln.o(N - 1) = (ln.v(0) - ln.v(N - 2)) * inv2dx;
}

void line_torus4(const Line& ln, int N, double inv12dx) {
  auto w = [N](int k) { return (k % N + N) % N; };
  for (int k = 0; k < N; ++k) {
    ln.o(k) = (-ln.v(w(k + 2)) + 8.0 * ln.v(w(k + 1)) - 8.0 * ln.v(w(k - 1)) + ln.v(w(k - 2))) *
              inv12dx;
  }
}

void line_patch(const Line& ln, int N, double dx, int order) {
  double inv2dx = 1.0 / (2.0 * dx);
  ln.o(0) = (-3.0 * ln.v(0) + 4.0 * ln.v(1) - ln.v(2)) * inv2dx;
  ln.o(N - 1) = (3.0 * ln.v(N - 1) - 4.0 * ln.v(N - 2) + ln.v(N - 3)) * inv2dx;
  if (order == 4 && N >= 5) {
    ln.o(1) = (ln.v(2) - ln.v(0)) * inv2dx;
    ln.o(N - 2) = (ln.v(N - 1) - ln.v(N - 3)) * inv2dx;
    double inv12dx = 1.0 / (12.0 * dx);
    for (int k = 2; k < N - 2; ++k)
      ln.o(k) = (-ln.v(k + 2) + 8.0 * ln.v(k + 1) - 8.0 * ln.v(k - 1) + ln.v(k - 2)) * inv12dx;
  } else {
    for (int k = 1; k < N - 1; ++k) ln.o(k) = (ln.v(k + 1) - ln.v(k - 1)) * inv2dx;
  }
}

}  // namespace

void axis_derivative(const DomainSpec& dom, int axis, const double* in, double* out) {
  std::size_t npts = dom.num_points();
  if (dom.kind == DomainKind::Homogeneous) {
    std::memset(out, 0, npts * sizeof(double));
    return;
  }
  int N = dom.shape[axis];
  std::size_t st = dom.stride(axis);
  std::size_t block = st * static_cast<std::size_t>(N);
  std::size_t nblocks = npts / block;
  double dx = dom.spacing[axis];

  for (std::size_t b = 0; b < nblocks; ++b)
    for (std::size_t r = 0; r < st; ++r) {
      Line ln{in, out, b * block + r, st};
      if (dom.kind == DomainKind::Torus) {
        if (dom.stencil_order == 4)
          line_torus4(ln, N, 1.0 / (12.0 * dx));
        else
          line_torus2(ln, N, 1.0 / (2.0 * dx));
      } else {
        line_patch(ln, N, dx, dom.stencil_order);
      }
    }
}

}  // namespace imcf
