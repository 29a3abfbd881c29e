#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imcf {

// Base for all recoverable flow/geometry errors.
class FlowError : public std::runtime_error {
public:
  explicit FlowError(const std::string& what) : std::runtime_error(what) {}
};

// Pointwise metric factorization failed (metric not SPD at `point`).
class NotPositiveDefinite : public FlowError {
public:
  explicit NotPositiveDefinite(std::size_t point)
      : FlowError("metric not positive definite at grid point " + std::to_string(point)),
        point(point) {}
  std::size_t point;
};

class DegenerateMetric : public FlowError {
public:
  explicit DegenerateMetric(const std::string& what) : FlowError(what) {}
};

class NonpositiveH : public FlowError {
public:
  explicit NonpositiveH(std::size_t point, double value)
      : FlowError("mean curvature not positive at grid point " + std::to_string(point) +
                  " (H = " + std::to_string(value) + ")"),
        point(point), value(value) {}
  std::size_t point;
  double value;
};

// A diffeomorphism sample left the patch interior by more than one cell.
class MapLeftDomain : public FlowError {
public:
  explicit MapLeftDomain(std::size_t point)
      : FlowError("evolving map left the domain at grid point " + std::to_string(point)),
        point(point) {}
  std::size_t point;
};

class OutsideChart : public FlowError {
public:
  explicit OutsideChart(const std::string& what) : FlowError(what) {}
};

class ZeroSecondFundamentalForm : public FlowError {
public:
  ZeroSecondFundamentalForm() : FlowError("cannot rescale: |A| vanishes identically") {}
};

class ClosedIntegralOnPatch : public FlowError {
public:
  ClosedIntegralOnPatch()
      : FlowError("closed-manifold integral requested on a bounded patch") {}
};

class InsufficientLevels : public FlowError {
public:
  InsufficientLevels() : FlowError("convergence order needs at least 3 refinement levels") {}
};

}  // namespace imcf
