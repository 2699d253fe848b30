#include "eeesim/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eeesim {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

bool parse_i64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

} // namespace

TrafficTrace ingest_trace_file(const std::string& path, bool strict_monotone) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);

    TrafficTrace trace;
    trace.label = path;
    bool have_meta = false;
    double meta_duration_s = 0.0;

    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    Ns prev_time = 0;
    bool sorted = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            // "# line_rate_bps=<int> duration_s=<float>"
            std::istringstream ls(line.substr(1));
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                try {
                    if (key == "line_rate_bps") {
                        trace.line_rate_bps = std::stod(val);
                        have_meta = true;
                    } else if (key == "duration_s") {
                        meta_duration_s = std::stod(val);
                        have_meta = true;
                    }
                } catch (const std::exception&) {
                    parse_fail(path, line_no, "malformed metadata token '" + tok + "'");
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "time_ns,size_bits")
                parse_fail(path, line_no, "expected header 'time_ns,size_bits', got '" + line + "'");
            header_seen = true;
            continue;
        }

        const auto comma = line.find(',');
        if (comma == std::string::npos) parse_fail(path, line_no, "expected 'time,size' row");
        std::int64_t t = 0;
        std::int64_t bits = 0;
        if (!parse_i64(line.substr(0, comma), t))
            parse_fail(path, line_no, "malformed time_ns field");
        if (!parse_i64(line.substr(comma + 1), bits))
            parse_fail(path, line_no, "malformed size_bits field");
        if (t < 0) parse_fail(path, line_no, "negative timestamp");
        if (bits <= 0) parse_fail(path, line_no, "non-positive packet size");
        if (!trace.events.empty() && t < prev_time) {
            if (strict_monotone) parse_fail(path, line_no, "non-monotone timestamp");
            sorted = false;
        }
        prev_time = t;
        trace.events.push_back({t, bits});
    }

    if (!header_seen) throw std::runtime_error(path + ": empty trace file");
    if (!sorted)
        std::stable_sort(trace.events.begin(), trace.events.end(),
                         [](const PacketEvent& a, const PacketEvent& b) {
                             return a.arrival_time < b.arrival_time;
                         });

    // Raw archive files use absolute (often epoch) timestamps.
    if (!have_meta && !trace.events.empty()) {
        const Ns t0 = trace.events.front().arrival_time;
        for (auto& e : trace.events) e.arrival_time -= t0;
    }

    if (have_meta && meta_duration_s > 0.0) {
        trace.duration = s_to_ns(meta_duration_s);
    } else {
        trace.duration = trace.events.empty() ? 0 : trace.events.back().arrival_time + 1;
    }
    trace.validate();
    return trace;
}

void export_trace_file(const TrafficTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    char meta[160];
    std::snprintf(meta, sizeof(meta), "# line_rate_bps=%lld duration_s=%.17g\n",
                  static_cast<long long>(trace.line_rate_bps), trace.duration_s());
    out << meta << "time_ns,size_bits\n";
    for (const auto& e : trace.events)
        out << e.arrival_time << ',' << e.size << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace eeesim
