#include "gridfeat/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gridfeat {
namespace {

constexpr double kPi = std::numbers::pi;
double rad(double d) { return d * kPi / 180.0; }
double deg(double r) { return r * 180.0 / kPi; }

// Atmospheric refraction at the apparent horizon, degrees.
double refraction_deg(double elevation) {
  if (elevation > 85.0) return 0.0;
  const double te = std::tan(rad(elevation));
  double arcsec;
  if (elevation > 5.0) {
    arcsec = 58.1 / te - 0.07 / (te * te * te) + 0.000086 / std::pow(te, 5);
  } else if (elevation > -0.575) {
    arcsec = 1735.0 + elevation * (-518.2 + elevation * (103.4 + elevation * (-12.79 + elevation * 0.711)));
  } else {
    arcsec = -20.772 / te;
  }
  return arcsec / 3600.0;
}

}  // namespace

SolarPosition solar_position(double utc_seconds, double latitude_deg, double longitude_deg) {
  if (!(std::abs(latitude_deg) <= 90.0)) throw std::invalid_argument("latitude must lie in [-90, 90]");
  const double julian_day = utc_seconds / 86400.0 + 2440587.5;
  const double t = (julian_day - 2451545.0) / 36525.0;

  const double mean_long = std::fmod(280.46646 + t * (36000.76983 + t * 0.0003032), 360.0);
  const double mean_anom = 357.52911 + t * (35999.05029 - 0.0001537 * t);
  const double ecc = 0.016708634 - t * (0.000042037 + 0.0000001267 * t);
  const double m = rad(mean_anom);
  const double center = std::sin(m) * (1.914602 - t * (0.004817 + 0.000014 * t)) +
                        std::sin(2 * m) * (0.019993 - 0.000101 * t) + std::sin(3 * m) * 0.000289;
  const double true_long = mean_long + center;
  const double omega = 125.04 - 1934.136 * t;
  const double apparent_long = true_long - 0.00569 - 0.00478 * std::sin(rad(omega));
  const double mean_obliq =
      23.0 + (26.0 + (21.448 - t * (46.815 + t * (0.00059 - t * 0.001813))) / 60.0) / 60.0;
  const double obliq = mean_obliq + 0.00256 * std::cos(rad(omega));
  const double declination = deg(std::asin(std::sin(rad(obliq)) * std::sin(rad(apparent_long))));

  const double y = std::pow(std::tan(rad(obliq / 2.0)), 2);
  const double l0 = rad(mean_long);
  const double eq_time = 4.0 * deg(y * std::sin(2 * l0) - 2 * ecc * std::sin(m) +
                                   4 * ecc * y * std::sin(m) * std::cos(2 * l0) -
                                   0.5 * y * y * std::sin(4 * l0) - 1.25 * ecc * ecc * std::sin(2 * m));

  double day_minutes = std::fmod(utc_seconds, 86400.0) / 60.0;
  if (day_minutes < 0) day_minutes += 1440.0;
  double true_solar_time = std::fmod(day_minutes + eq_time + 4.0 * longitude_deg, 1440.0);
  if (true_solar_time < 0) true_solar_time += 1440.0;
  const double hour_angle = true_solar_time / 4.0 < 0 ? true_solar_time / 4.0 + 180.0 : true_solar_time / 4.0 - 180.0;

  const double lat = rad(latitude_deg);
  const double dec = rad(declination);
  double cos_zenith = std::sin(lat) * std::sin(dec) + std::cos(lat) * std::cos(dec) * std::cos(rad(hour_angle));
  cos_zenith = std::clamp(cos_zenith, -1.0, 1.0);
  const double zenith = deg(std::acos(cos_zenith));
  const double elevation = 90.0 - zenith;

  double azimuth;
  const double denom = std::cos(lat) * std::sin(rad(zenith));
  if (std::abs(denom) > 1e-12) {
    const double cos_az = std::clamp((std::sin(lat) * cos_zenith - std::sin(dec)) / denom, -1.0, 1.0);
    const double a = deg(std::acos(cos_az));
    azimuth = hour_angle > 0 ? std::fmod(a + 180.0, 360.0) : std::fmod(540.0 - a, 360.0);
  } else {
    azimuth = latitude_deg > 0 ? 180.0 : 0.0;
  }
  if (azimuth >= 360.0) azimuth -= 360.0;
  if (azimuth < 0.0) azimuth += 360.0;

  SolarPosition p;
  p.altitude_deg = std::clamp(elevation + refraction_deg(elevation), -90.0, 90.0);
  p.azimuth_deg = azimuth;
  return p;
}

double haurwitz_radiation(double altitude_deg) {
  if (altitude_deg <= 0.0) return 0.0;
  const double s = std::sin(rad(altitude_deg));
  return 1098.0 * s * std::exp(-0.057 / s);
}

SolarFeatures solar_features(std::int64_t epoch_hour, double latitude_deg, double longitude_deg) {
  const auto pos = solar_position(static_cast<double>(epoch_hour) * 3600.0 + 1800.0, latitude_deg, longitude_deg);
  return {pos.altitude_deg, pos.azimuth_deg, haurwitz_radiation(pos.altitude_deg)};
}

}  // namespace gridfeat
