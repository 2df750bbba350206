#pragma once

#include <cmath>

namespace fsosec::units
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace fsosec::units
