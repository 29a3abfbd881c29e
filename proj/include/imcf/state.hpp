#pragma once

#include <cstdint>

#include "imcf/fields.hpp"

namespace imcf {

enum class FlowVariant : std::uint8_t { Raw = 0, Simplified = 1, GaugeFixed = 2 };

// The evolving pair (g, h) at flow time t.
struct SpacelikeState {
  Sym2Field g;
  Sym2Field h;
  double t = 0.0;

  const DomainSpec& dom() const { return g.dom(); }
};

// De Turck companion for GaugeFixed runs: fixed target metric s and the
// evolving diffeomorphism F (one target-coordinate tuple per grid point,
// identity at t = 0). The De Turck vector is recomputed from (g_hat, s).
struct GaugeData {
  Sym2Field s;
  VectorField F;
};

}  // namespace imcf
