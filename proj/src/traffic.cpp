#include "eeesim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace eeesim {

Bits TrafficTrace::total_bits() const {
    Bits sum = 0;
    for (const auto& e : events) sum += e.size;
    return sum;
}

double TrafficTrace::mean_packet_bits() const {
    if (events.empty()) return 0.0;
    return static_cast<double>(total_bits()) / static_cast<double>(events.size());
}

void TrafficTrace::validate() const {
    if (duration <= 0) throw std::invalid_argument("trace duration must be positive");
    if (line_rate_bps <= 0) throw std::invalid_argument("line rate must be positive");
    Ns prev = 0;
    for (const auto& e : events) {
        if (e.size <= 0) throw std::invalid_argument("packet size must be positive");
        if (e.arrival_time < prev) throw std::invalid_argument("events not sorted by arrival time");
        if (e.arrival_time >= duration) throw std::invalid_argument("arrival time beyond trace duration");
        prev = e.arrival_time;
    }
}

double LoadSeries::mean() const {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double pareto_sample(double alpha, double b, double u) {
    if (!(alpha > 0.0)) throw std::invalid_argument("pareto_sample: alpha must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("pareto_sample: b must be > 0");
    if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("pareto_sample: u must be in (0,1]");
    return b * std::pow(u, -1.0 / alpha);
}

namespace {

// Uniform on (0,1] from raw engine output. uniform_real_distribution is not
// bit-portable across standard libraries; trace determinism requires it.
double uniform_open_closed(std::mt19937_64& eng) {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

} // namespace

TrafficTrace synthesize_trace(const ParetoSourceConfig& cfg, double duration_s,
                              double tick_s, double line_rate_bps) {
    if (cfg.source_count < 0) throw std::invalid_argument("synthesize_trace: source count must be >= 0");
    if (!(cfg.alpha > 0.0) || !(cfg.location_b > 0.0))
        throw std::invalid_argument("synthesize_trace: alpha and b must be > 0");
    if (cfg.packet_size <= 0) throw std::invalid_argument("synthesize_trace: packet size must be > 0");
    if (!(duration_s > 0.0) || !(tick_s > 0.0))
        throw std::invalid_argument("synthesize_trace: duration and tick must be > 0");

    const Ns tick_ns = s_to_ns(tick_s);
    const Ns duration_ns = s_to_ns(duration_s);
    const std::int64_t total_ticks = duration_ns / tick_ns;

    TrafficTrace trace;
    trace.duration = duration_ns;
    trace.line_rate_bps = line_rate_bps;

    // Count of sources emitting at each tick; merged emission keeps arrival
    // order stable without a per-source event sort.
    std::vector<std::uint32_t> on_count(static_cast<std::size_t>(total_ticks), 0);

    for (int m = 0; m < cfg.source_count; ++m) {
        std::seed_seq sseq{cfg.seed, static_cast<std::uint64_t>(m)};
        std::mt19937_64 eng(sseq);
        bool on = (eng() & 1u) != 0;
        std::int64_t t = 0;
        while (t < total_ticks) {
            // real-valued period, rounded up to whole ticks
            const double raw = pareto_sample(cfg.alpha, cfg.location_b, uniform_open_closed(eng));
            const auto len = static_cast<std::int64_t>(std::ceil(std::min(raw, 1e15)));
            if (on) {
                const std::int64_t end = std::min(t + len, total_ticks);
                for (std::int64_t i = t; i < end; ++i) on_count[static_cast<std::size_t>(i)]++;
            }
            t += len;
            on = !on;
        }
    }

    for (std::int64_t i = 0; i < total_ticks; ++i) {
        const auto n = on_count[static_cast<std::size_t>(i)];
        for (std::uint32_t k = 0; k < n; ++k)
            trace.events.push_back({i * tick_ns, cfg.packet_size});
    }
    return trace;
}

LoadSeries bin_trace(const TrafficTrace& trace, double tick_s) {
    if (!(tick_s > 0.0)) throw std::invalid_argument("bin_trace: tick must be > 0");
    const Ns tick_ns = s_to_ns(tick_s);
    const std::int64_t bins =
        trace.duration > 0 ? (trace.duration + tick_ns - 1) / tick_ns : 0;

    LoadSeries out;
    out.tick_s = tick_s;
    out.values.assign(static_cast<std::size_t>(bins), 0.0);
    for (const auto& e : trace.events) {
        const auto idx = static_cast<std::size_t>(e.arrival_time / tick_ns);
        out.values[idx] += static_cast<double>(e.size);
    }
    return out;
}

LoadSeries aggregate_series(const LoadSeries& series, std::size_t a) {
    if (a < 1) throw std::invalid_argument("aggregate_series: level must be >= 1");
    if (a == 1) return series;

    LoadSeries out;
    out.tick_s = series.tick_s * static_cast<double>(a);
    const std::size_t blocks = series.values.size() / a;
    out.values.reserve(blocks);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        double sum = 0.0;
        for (std::size_t i = blk * a; i < (blk + 1) * a; ++i) sum += series.values[i];
        out.values.push_back(sum / static_cast<double>(a));
    }
    return out;
}

} // namespace eeesim
