#pragma once

#include <cstdint>

namespace gridfeat {

struct SolarPosition {
  double altitude_deg = 0.0;  // refraction-corrected elevation
  double azimuth_deg = 0.0;   // clockwise from north, [0, 360)
};

/// NOAA solar position for an instant given in UTC epoch seconds.
SolarPosition solar_position(double utc_seconds, double latitude_deg, double longitude_deg);

/// Haurwitz clear-sky global horizontal irradiance, W/m².
double haurwitz_radiation(double altitude_deg);

struct SolarFeatures {
  double altitude_deg;
  double azimuth_deg;
  double clear_sky_wm2;
};

/// Evaluated at the midpoint of the epoch hour.
SolarFeatures solar_features(std::int64_t epoch_hour, double latitude_deg, double longitude_deg);

}  // namespace gridfeat
