#ifndef EEESIM_TRAFFIC_HPP
#define EEESIM_TRAFFIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eeesim/units.hpp"

namespace eeesim {

struct PacketEvent {
    Ns arrival_time = 0; // ns from trace start
    Bits size = 0;       // bits, > 0

    friend bool operator==(const PacketEvent&, const PacketEvent&) = default;
};

struct TrafficTrace {
    std::vector<PacketEvent> events; // sorted by arrival_time, ties stable
    Ns duration = 0;                 // every arrival_time < duration
    double line_rate_bps = 1e9;
    std::string label;

    double duration_s() const { return ns_to_s(duration); }
    Bits total_bits() const;
    // mean bits per packet; 0 for an empty trace
    double mean_packet_bits() const;
    void validate() const; // throws std::invalid_argument on broken invariants
};

// Superposed ON/OFF sources with Pareto period lengths on an integer tick grid.
struct ParetoSourceConfig {
    int source_count = 10;        // M
    double alpha = 1.0;           // tail index, > 0
    double location_b = 1.0;      // location parameter, in ticks, > 0
    Bits packet_size = 8000;      // bits emitted per ON tick per source
    std::uint64_t seed = 1;
};

// bits accumulated per fixed tick
struct LoadSeries {
    double tick_s = 1e-3;
    std::vector<double> values;

    double mean() const;
};

// Inverse-CDF Pareto draw: b * u^(-1/alpha), u in (0,1]. Output is always >= b.
double pareto_sample(double alpha, double b, double u);

TrafficTrace synthesize_trace(const ParetoSourceConfig& cfg, double duration_s,
                              double tick_s, double line_rate_bps);

LoadSeries bin_trace(const TrafficTrace& trace, double tick_s);

// Block means at aggregation level a; trailing partial block discarded.
LoadSeries aggregate_series(const LoadSeries& series, std::size_t a);

} // namespace eeesim

#endif
