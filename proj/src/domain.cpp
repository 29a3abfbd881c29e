#include "imcf/domain.hpp"

namespace imcf {

DomainSpec DomainSpec::homogeneous(int n) {
  DomainSpec d;
  d.kind = DomainKind::Homogeneous;
  d.n = n;
  return d;
}

DomainSpec DomainSpec::torus(int n, int points, double extent) {
  DomainSpec d;
  d.kind = DomainKind::Torus;
  d.n = n;
  d.shape.assign(n, points);
  d.spacing.assign(n, extent / points);
  d.origin.assign(n, 0.0);
  return d;
}

DomainSpec DomainSpec::patch(int n, int points, double half_width, BoundaryPolicy bc) {
  DomainSpec d;
  d.kind = DomainKind::Patch;
  d.n = n;
  d.shape.assign(n, points);
  d.spacing.assign(n, 2.0 * half_width / (points - 1));
  d.origin.assign(n, -half_width);
  d.boundary = bc;
  return d;
}

std::size_t DomainSpec::num_points() const {
  std::size_t p = 1;
  for (int s : shape) p *= static_cast<std::size_t>(s);
  return p;
}

std::size_t DomainSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int a = axis + 1; a < naxes(); ++a) s *= static_cast<std::size_t>(shape[a]);
  return s;
}

void DomainSpec::point_coords(std::size_t p, double* x) const {
  for (int a = naxes() - 1; a >= 0; --a) {
    std::size_t sa = static_cast<std::size_t>(shape[a]);
    x[a] = coordinate(a, static_cast<int>(p % sa));
    p /= sa;
  }
}

bool DomainSpec::on_boundary(std::size_t p) const {
  if (kind != DomainKind::Patch) return false;
  for (int a = naxes() - 1; a >= 0; --a) {
    std::size_t sa = static_cast<std::size_t>(shape[a]);
    std::size_t i = p % sa;
    if (i == 0 || i + 1 == sa) return true;
    p /= sa;
  }
  return false;
}

bool DomainSpec::in_boundary_shell(std::size_t p, int width) const {
  if (kind != DomainKind::Patch) return false;
  for (int a = naxes() - 1; a >= 0; --a) {
    std::size_t sa = static_cast<std::size_t>(shape[a]);
    int i = static_cast<int>(p % sa);
    if (i < width || i >= shape[a] - width) return true;
    p /= sa;
  }
  return false;
}

bool DomainSpec::validate(std::vector<std::string>& errors) const {
  std::size_t before = errors.size();
  if (n < 2) errors.push_back("dimension n must be >= 2");
  if (kind == DomainKind::Homogeneous) {
    if (!shape.empty()) errors.push_back("homogeneous domain carries no grid axes");
  } else {
    if (static_cast<int>(shape.size()) != n)
      errors.push_back("grid must have one axis per manifold dimension");
    for (int s : shape)
      if (s < 4) errors.push_back("per-axis point count must be >= 4");
    for (double dx : spacing)
      if (!(dx > 0.0)) errors.push_back("grid spacing must be positive");
  }
  if (stencil_order != 2 && stencil_order != 4)
    errors.push_back("stencil order must be 2 or 4");
  return errors.size() == before;
}

}  // namespace imcf
