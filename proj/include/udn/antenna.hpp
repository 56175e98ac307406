#ifndef UDN_ANTENNA_HPP
#define UDN_ANTENNA_HPP

// Vertical BS antenna pattern with density-adaptive downtilt. The horizontal
// pattern is omnidirectional; the vertical cut is a cosine-power main lobe
// over a sidelobe floor:
//   G(r) = G_M + max(10 log10 |cos(theta - tilt)|^n, F_V)  [dB]
// where theta = arctan(L/r) is the UE elevation seen from the BS.

namespace udn {

struct AntennaSpec {
    bool enabled = false;
    double boresight_gain_db = 8.15;  // G_M
    double vertical_hpbw_deg = 19.5;  // B_V
    double cos_exponent = 47.64;      // n
    double sidelobe_floor_db = -12.0; // F_V
    double tilt_margin = 0.7;         // z, fraction of B_V added below the cell edge
};

// Vertical pattern offset G_V(theta, tilt) in dB, floored at sidelobe_floor.
double vertical_offset_db(const AntennaSpec& a, double theta_deg, double tilt_deg);

// Downtilt pointing at the coverage-area edge r_cov = 1/sqrt(lambda pi) plus
// a margin of z * B_V, clamped to 90 degrees.
double downtilt_deg(const AntennaSpec& a, double lambda_per_km2, double height_km);

// Elevation of a UE at ground distance r from a BS at height offset L.
double ue_elevation_deg(double r_km, double height_km);

// Total link gain G_M + G_V in dB / linear for a link of ground distance r.
double total_gain_db(const AntennaSpec& a, double r_km, double height_km, double tilt_deg);
double total_gain_linear(const AntennaSpec& a, double r_km, double height_km, double tilt_deg);

} // namespace udn

#endif // UDN_ANTENNA_HPP
