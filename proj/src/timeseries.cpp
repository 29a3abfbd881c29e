#include "imcf/timeseries.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace imcf {

std::string format_csv_row(const DiagnosticsRecord& r) {
  const double cols[17] = {r.t,     r.H_min,  r.H_max,  r.A2_min,  r.A2_max, r.pinch_eps,
                           r.pinch_beta, r.F_n, r.D1,   r.D2,      r.normG2, r.normC2,
                           r.sec_min,    r.sec_max,     r.vol,     r.s1,     r.s2};
  std::string out;
  char buf[40];
  for (int i = 0; i < 17; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", cols[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

void emit_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write time series: " + path);
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << format_csv_row(r) << '\n';
}

}  // namespace imcf
