#pragma once

#include <string>
#include <vector>

#include "imcf/diagnostics.hpp"

namespace imcf {

// Frozen CSV schema; golden-file tested. Columns map 1:1 onto
// DiagnosticsRecord in declaration order.
inline constexpr const char* kCsvHeader =
    "t,H_min,H_max,A2_min,A2_max,eps,beta,F_n,D1,D2,normG2,normC2,"
    "sec_min,sec_max,vol,s1,s2";

std::string format_csv_row(const DiagnosticsRecord& r);

// Writes header + one row per record (round-trippable %.17g values).
void emit_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path);

}  // namespace imcf
