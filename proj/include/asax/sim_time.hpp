#pragma once

#include <cmath>
#include <cstdint>

namespace asax {

// Simulated time, milliseconds.
using SimTime = std::int64_t;

constexpr SimTime kMillisPerSecond = 1000;

inline constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1000.0; }
inline constexpr double to_hours(SimTime t) { return static_cast<double>(t) / 3.6e6; }

inline SimTime from_seconds(double s) { return static_cast<SimTime>(std::llround(s * 1000.0)); }

}  // namespace asax
