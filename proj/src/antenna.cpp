#include "udn/antenna.hpp"

#include "udn/units.hpp"

#include <algorithm>
#include <cmath>

namespace udn {

double vertical_offset_db(const AntennaSpec& a, double theta_deg, double tilt_deg)
{
    const double ac = std::fabs(std::cos(deg_to_rad(theta_deg - tilt_deg)));
    if (ac <= 0.0)
        return a.sidelobe_floor_db;
    const double lobe = 10.0 * a.cos_exponent * std::log10(ac);
    return std::max(lobe, a.sidelobe_floor_db);
}

double downtilt_deg(const AntennaSpec& a, double lambda_per_km2, double height_km)
{
    // Boresight meets the ground at the typical coverage radius 1/sqrt(lambda pi),
    // then tilts a further z * B_V below it so the cell interior sits inside the
    // main lobe while far interferers fall onto the sidelobe floor.
    const double edge_elev = rad_to_deg(std::atan(height_km * std::sqrt(lambda_per_km2 * pi)));
    return std::min(edge_elev + a.tilt_margin * a.vertical_hpbw_deg, 90.0);
}

double ue_elevation_deg(double r_km, double height_km)
{
    return rad_to_deg(std::atan2(height_km, r_km));
}

double total_gain_db(const AntennaSpec& a, double r_km, double height_km, double tilt_deg)
{
    if (!a.enabled)
        return 0.0;
    const double theta = ue_elevation_deg(r_km, height_km);
    return a.boresight_gain_db + vertical_offset_db(a, theta, tilt_deg);
}

double total_gain_linear(const AntennaSpec& a, double r_km, double height_km, double tilt_deg)
{
    return db_to_linear(total_gain_db(a, r_km, height_km, tilt_deg));
}

} // namespace udn
