#pragma once

// Unit conventions: feet and seconds internally, mph at every external
// interface.

namespace cpa {

inline constexpr double kFeetPerMile = 5280.0;
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;

constexpr double mph_to_fps(double mph) { return mph * kFeetPerMile / kSecondsPerHour; }
constexpr double fps_to_mph(double fps) { return fps * kSecondsPerHour / kFeetPerMile; }
constexpr double feet_to_miles(double ft) { return ft / kFeetPerMile; }
constexpr double miles_to_feet(double mi) { return mi * kFeetPerMile; }

}  // namespace cpa
