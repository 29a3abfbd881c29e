#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "imcf/errors.hpp"
#include "imcf/state.hpp"

namespace imcf {

class CheckpointError : public FlowError {
public:
  explicit CheckpointError(const std::string& what) : FlowError(what) {}
};

// Versioned binary snapshot of a run. Byte layout (all multi-byte values
// little-endian):
//   magic   8 bytes "IMCFCKP1"
//   u32     format version (currently 1)
//   u64     scenario content hash (FNV-1a of the scenario text)
//   u64     scenario text length, followed by that many UTF-8 bytes
//   u8      domain kind, u8 boundary policy, u8 stencil order,
//   u8      interpolation order, u8 has_gauge
//   u32     manifold dimension n, u32 number of grid axes
//   per axis: u64 point count, f64 spacing, f64 origin
//   f64     flow time t, u64 step index, f64 |A| normalization of the run
//   f64[]   g components, then h components (component-major declared order)
//   f64[]   if has_gauge: background s components, then map F components
// Round-trips bit-exactly; a version or magic mismatch is rejected.
struct Checkpoint {
  std::uint32_t version = 1;
  std::uint64_t scenario_hash = 0;
  std::string scenario_text;
  double t = 0.0;
  std::uint64_t step = 0;
  double M_norm = 0.0;
  Sym2Field g, h;
  std::optional<GaugeData> gauge;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace imcf
