#ifndef EEESIM_TRACE_IO_HPP
#define EEESIM_TRACE_IO_HPP

#include <string>

#include "eeesim/traffic.hpp"

namespace eeesim {

// packets-csv: header "time_ns,size_bits", one event per row, LF endings.
// An optional first-line comment "# line_rate_bps=<int> duration_s=<float>"
// carries trace metadata; files without it are treated as raw archive dumps
// and get their timestamps normalized so the first event defines t = 0.
TrafficTrace ingest_trace_file(const std::string& path, bool strict_monotone = true);

void export_trace_file(const TrafficTrace& trace, const std::string& path);

} // namespace eeesim

#endif
