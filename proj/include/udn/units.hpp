#ifndef UDN_UNITS_HPP
#define UDN_UNITS_HPP

// Unit conversions. Everything inside the engines is linear, in km and W;
// decibel and metre values appear only at configuration boundaries.

#include <cmath>

namespace udn {

constexpr double pi = 3.141592653589793238462643383279502884;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double meters_to_km(double m) { return m * 1e-3; }
inline double km_to_meters(double km) { return km * 1e3; }

inline double deg_to_rad(double d) { return d * pi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / pi; }

} // namespace udn

#endif // UDN_UNITS_HPP
