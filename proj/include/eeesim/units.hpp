#ifndef EEESIM_UNITS_HPP
#define EEESIM_UNITS_HPP

#include <cmath>
#include <cstdint>

namespace eeesim {

// Simulation clock: integer nanoseconds. Keeps state-residency sums and
// bit accounting exact over multi-minute runs.
using Ns = std::int64_t;
using Bits = std::int64_t;

constexpr Ns kNsPerSec = 1'000'000'000;

inline constexpr double ns_to_s(Ns t) { return static_cast<double>(t) / 1e9; }

inline Ns s_to_ns(double seconds) { return static_cast<Ns>(std::llround(seconds * 1e9)); }

inline Ns ms_to_ns(double ms) { return static_cast<Ns>(std::llround(ms * 1e6)); }

} // namespace eeesim

#endif
