#pragma once

#include "imcf/domain.hpp"
#include "imcf/fields.hpp"

namespace imcf {

// First coordinate derivative of one scalar slab along `axis`.
// Homogeneous: exactly zero. Torus: periodic central differences (order 2 or
// 4 per dom.stencil_order). Patch: central interior, one-sided second-order
// at the two boundary layers (fourth-order interior degrades gracefully to
// the available width near the ends).
void axis_derivative(const DomainSpec& dom, int axis, const double* in, double* out);

// Applies axis_derivative to every component slab of `in`.
template <class FieldIn, class FieldOut>
void derivative_all(const FieldIn& in, int axis, FieldOut& out) {
  for (int c = 0; c < in.ncomp(); ++c)
    axis_derivative(in.dom(), axis, in.comp(c), out.comp(c));
}

}  // namespace imcf
