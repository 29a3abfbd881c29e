#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace imcf {

enum class DomainKind : std::uint8_t { Homogeneous = 0, Torus = 1, Patch = 2 };

enum class BoundaryPolicy : std::uint8_t { DirichletFromOracle = 0, Frozen = 1 };

// Discretized coordinate domain. For Torus and Patch the grid dimension equals
// the manifold dimension n; Homogeneous carries a single point and all spatial
// derivative operations on it return exactly zero.
struct DomainSpec {
  DomainKind kind = DomainKind::Homogeneous;
  int n = 2;                         // manifold dimension, >= 2
  std::vector<int> shape;            // per-axis point counts (empty for Homogeneous)
  std::vector<double> spacing;       // dx per axis
  std::vector<double> origin;        // coordinate of index 0 per axis
  BoundaryPolicy boundary = BoundaryPolicy::Frozen;  // Patch only
  int stencil_order = 2;             // 2 (default) or 4 (Torus interior)
  int interp_order = 2;              // grid interpolation: 2 multilinear, 3 quadratic

  static DomainSpec homogeneous(int n);
  // Periodic box [0, extent)^n with `points` nodes per axis (node extent/points apart).
  static DomainSpec torus(int n, int points, double extent);
  // Coordinate box [-half_width, half_width]^n including both end nodes.
  static DomainSpec patch(int n, int points, double half_width,
                          BoundaryPolicy bc = BoundaryPolicy::Frozen);

  std::size_t num_points() const;
  std::size_t stride(int axis) const;  // row-major, last axis contiguous
  int naxes() const { return static_cast<int>(shape.size()); }
  double coordinate(int axis, int index) const { return origin[axis] + spacing[axis] * index; }
  void point_coords(std::size_t p, double* x) const;  // x has naxes() entries
  double period(int axis) const { return spacing[axis] * shape[axis]; }  // Torus only

  // True if p lies on the patch boundary (any axis index at 0 or last).
  bool on_boundary(std::size_t p) const;
  // True if p is within `width` cells of the patch boundary on some axis.
  bool in_boundary_shell(std::size_t p, int width) const;

  bool operator==(const DomainSpec&) const = default;

  // Appends human-readable problems to `errors`; returns true when none found.
  bool validate(std::vector<std::string>& errors) const;
};

}  // namespace imcf
