#include "gridfeat/inventory.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace gridfeat {
namespace {

using G = FeatureGroup;
using P = Provenance;

FeatureDescriptor make(std::string name, G group, std::string path, std::string unit, P provenance, int horizon,
                       std::string recipe, DType dtype = DType::Numeric) {
  FeatureDescriptor d;
  d.name = std::move(name);
  d.group = group;
  d.taxonomy_path = std::move(path);
  d.unit = std::move(unit);
  d.provenance = provenance;
  d.leakage_horizon_hours = horizon;
  d.recipe = std::move(recipe);
  d.dtype = dtype;
  return d;
}

FeatureDescriptor deterministic(std::string name, G group, std::string path, std::string unit, std::string recipe,
                                DType dtype = DType::Numeric) {
  auto d = make(std::move(name), group, std::move(path), std::move(unit), P::Engineered, 0, std::move(recipe), dtype);
  d.deterministic = true;
  return d;
}

FeatureDescriptor metadata(std::string name, G group, std::string path, std::string unit, std::string recipe,
                           DType dtype = DType::Numeric) {
  return make(std::move(name), group, std::move(path), std::move(unit), P::Metadata, 0, std::move(recipe), dtype);
}

FeatureDescriptor submeter(FeatureDescriptor d) {
  d.submeter = true;
  return d;
}

void append(std::vector<FeatureDescriptor>& out, std::vector<FeatureDescriptor> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

std::vector<FeatureDescriptor> consumption() {
  const std::string path = "domain/household/energy";
  return {make("consumption_lag1", G::Domain, path, "kWh", P::Measured, 1, "target:lag:1"),
          make("consumption_lag23", G::Domain, path, "kWh", P::Engineered, 23, "target:lag:23"),
          make("consumption_lag24", G::Domain, path, "kWh", P::Engineered, 24, "target:lag:24"),
          make("consumption_lag168", G::Domain, path, "kWh", P::Engineered, 168, "target:lag:168"),
          make("rolling_mean_24", G::Domain, path, "kWh", P::Engineered, 1, "target:rolling_mean:24"),
          make("rolling_std_24", G::Domain, path, "kWh", P::Engineered, 1, "target:rolling_std:24")};
}

std::vector<FeatureDescriptor> time_features() {
  auto part = deterministic("part_of_day", G::Contextual, "contextual/time/time_of_the_day", "dimensionless",
                            "calendar:part_of_day", DType::Categorical);
  part.categories = {"night", "morning", "afternoon", "evening"};
  return {deterministic("timestamp_hours", G::Contextual, "contextual/time", "h", "calendar:timestamp_hours"),
          deterministic("hour_of_day", G::Contextual, "contextual/time/time_of_the_day", "h", "calendar:hour_of_day"),
          deterministic("day_of_week", G::Contextual, "contextual/time", "dimensionless", "calendar:day_of_week"),
          deterministic("week_of_year", G::Contextual, "contextual/time/seasons", "dimensionless",
                        "calendar:week_of_year"),
          part,
          deterministic("dst", G::Contextual, "contextual/time", "dimensionless", "calendar:dst", DType::Boolean),
          deterministic("utc_offset", G::Contextual, "contextual/time", "h", "calendar:utc_offset")};
}

std::vector<std::string> collect(const std::vector<HourlyFrame>& frames, std::string (*get)(const HourlyFrame&)) {
  std::set<std::string> values;
  for (const auto& f : frames) values.insert(get(f));
  if (values.empty()) values.insert("unknown");
  return {values.begin(), values.end()};
}

std::vector<std::string> attribute_values(const std::vector<HourlyFrame>& frames, const std::string& key) {
  std::set<std::string> values;
  for (const auto& f : frames) {
    auto it = f.attributes.find(key);
    if (it != f.attributes.end()) values.insert(it->second);
  }
  if (values.empty()) values.insert("unknown");
  return {values.begin(), values.end()};
}

std::vector<FeatureDescriptor> geo_features(const std::vector<HourlyFrame>& frames, bool with_household) {
  auto country = metadata("country", G::Contextual, "contextual/geolocation/region", "dimensionless", "geo:country",
                          DType::Categorical);
  country.categories = collect(frames, [](const HourlyFrame& f) { return f.country; });
  auto region = metadata("region", G::Contextual, "contextual/geolocation/region", "dimensionless", "geo:region",
                         DType::Categorical);
  region.categories = collect(frames, [](const HourlyFrame& f) { return f.region; });
  std::vector<FeatureDescriptor> out = {
      metadata("latitude", G::Contextual, "contextual/geolocation/latitude", "°", "geo:latitude"),
      metadata("longitude", G::Contextual, "contextual/geolocation/longitude", "°", "geo:longitude"), country, region};
  if (with_household) {
    auto id = metadata("household_id", G::Contextual, "contextual/geolocation", "dimensionless", "geo:household_id",
                       DType::Categorical);
    id.categories = collect(frames, [](const HourlyFrame& f) { return f.household_id; });
    out.push_back(id);
  }
  return out;
}

std::vector<FeatureDescriptor> solar_features() {
  const std::string path = "contextual/weather/solar";
  return {deterministic("solar_altitude", G::Contextual, path, "°", "solar:altitude"),
          deterministic("solar_azimuth", G::Contextual, path, "°", "solar:azimuth"),
          deterministic("clear_sky_radiation", G::Contextual, path, "W/m²", "solar:radiation")};
}

std::vector<FeatureDescriptor> behavioral_common() {
  auto flag = [](std::string name, std::string path, std::string recipe) {
    return deterministic(std::move(name), G::Behavioral, std::move(path), "dimensionless", std::move(recipe),
                         DType::Boolean);
  };
  return {flag("weekday", "behavioral/social_activities/weekday", "activity:weekday"),
          flag("weekend", "behavioral/social_activities/weekend", "activity:weekend"),
          flag("holiday", "behavioral/social_activities/holidays", "activity:holiday"),
          flag("day_before_holiday", "behavioral/social_activities/near_holidays", "activity:day_before_holiday"),
          flag("day_after_holiday", "behavioral/social_activities/near_holidays", "activity:day_after_holiday"),
          flag("breakfast", "behavioral/cooking", "activity:breakfast"),
          flag("lunch", "behavioral/cooking", "activity:lunch"),
          flag("dinner", "behavioral/cooking", "activity:dinner"),
          flag("work_schedule", "behavioral/work_schedule", "activity:work"),
          flag("free_time", "behavioral/work_schedule", "activity:free_time"),
          flag("sleep", "behavioral/work_schedule", "activity:sleep"),
          make("yesterday_median", G::Behavioral, "behavioral/social_activities", "kWh", P::Engineered, 1,
               "yesterday:median"),
          make("yesterday_ratio", G::Behavioral, "behavioral/social_activities", "dimensionless", P::Engineered, 1,
               "yesterday:ratio")};
}

FeatureDescriptor usage(std::string name, std::string path, std::string tag) {
  auto d = make(std::move(name), G::Behavioral, std::move(path), "dimensionless", P::Engineered, 1, "usage:" + tag,
                DType::Boolean);
  d.submeter = true;
  return d;
}

std::vector<FeatureDescriptor> submeter_channel(const std::string& channel) {
  const std::string path = "domain/household/appliances";
  return {submeter(make(channel + "_lag1", G::Domain, path, "kWh", P::Measured, 1, "channel:" + channel + ":lag:1")),
          submeter(make(channel + "_rolling_mean_24", G::Domain, path, "kWh", P::Engineered, 1,
                        "channel:" + channel + ":rolling_mean:24"))};
}

std::vector<FeatureDescriptor> hue(const std::vector<HourlyFrame>& frames) {
  std::vector<FeatureDescriptor> out = consumption();
  out.push_back(metadata("ev_battery_kwh", G::Domain, "domain/ev/capacity", "kWh", "attribute:ev_battery_kwh"));
  out.push_back(metadata("ev_owner", G::Domain, "domain/ev/capacity", "dimensionless", "attribute:ev_owner",
                         DType::Boolean));
  append(out, time_features());
  append(out, geo_features(frames, true));
  append(out, solar_features());
  out.push_back(make("temperature", G::Contextual, "contextual/weather/temperature", "°C", P::Measured, 1,
                     "channel:temperature:lag:1"));
  out.push_back(make("humidity", G::Contextual, "contextual/weather/relative_humidity", "%", P::Measured, 1,
                     "channel:humidity:lag:1"));
  out.push_back(make("pressure", G::Contextual, "contextual/weather/pressure", "kPa", P::Measured, 1,
                     "channel:pressure:lag:1"));
  out.push_back(make("cloud_cover", G::Contextual, "contextual/weather/cloud_coverage", "%", P::Measured, 1,
                     "channel:cloud_cover:lag:1"));
  auto type = metadata("building_type", G::Contextual, "contextual/building/type", "dimensionless",
                       "attribute:building_type", DType::Categorical);
  type.categories = attribute_values(frames, "building_type");
  auto facing = metadata("orientation", G::Contextual, "contextual/building/orientation", "dimensionless",
                         "attribute:orientation", DType::Categorical);
  facing.categories = attribute_values(frames, "orientation");
  out.push_back(type);
  out.push_back(facing);
  out.push_back(metadata("rental_units", G::Contextual, "contextual/building/area_density", "dimensionless",
                         "attribute:rental_units"));
  for (const char* hvac : {"air_conditioning", "gas_furnace", "heat_pump", "gas_fireplace", "electric_fireplace",
                           "in_floor_heating", "portable_ac", "cast_iron_radiators", "geothermal"}) {
    const std::string name = std::string("hvac_") + hvac;
    out.push_back(metadata(name, G::Contextual, "contextual/building/hvac", "dimensionless", "attribute:" + name,
                           DType::Boolean));
  }
  append(out, behavioral_common());
  return out;
}

std::vector<FeatureDescriptor> uci(const std::vector<HourlyFrame>& frames) {
  std::vector<FeatureDescriptor> out = consumption();
  out.push_back(make("reactive_power_lag1", G::Domain, "domain/household/reactive_power", "kvarh", P::Measured, 1,
                     "channel:reactive_kvarh:lag:1"));
  out.push_back(make("voltage_lag1", G::Domain, "domain/household/voltage", "V", P::Measured, 1,
                     "channel:voltage_v:lag:1"));
  out.push_back(make("intensity_lag1", G::Domain, "domain/household/current", "A", P::Measured, 1,
                     "channel:intensity_a:lag:1"));
  for (const char* ch : {"submeter_1", "submeter_2", "submeter_3"}) append(out, submeter_channel(ch));
  append(out, time_features());
  append(out, geo_features(frames, false));
  append(out, solar_features());
  append(out, behavioral_common());
  out.push_back(usage("kitchen_activity", "behavioral/cooking", "kitchen"));
  return out;
}

std::vector<FeatureDescriptor> refit(const std::vector<HourlyFrame>& frames) {
  std::vector<FeatureDescriptor> out = consumption();
  for (int a = 1; a <= 9; ++a) append(out, submeter_channel("appliance_" + std::to_string(a)));
  append(out, time_features());
  append(out, geo_features(frames, true));
  append(out, solar_features());
  auto type = metadata("building_type", G::Contextual, "contextual/building/type", "dimensionless",
                       "attribute:building_type", DType::Categorical);
  type.categories = attribute_values(frames, "building_type");
  out.push_back(type);
  out.push_back(metadata("household_size", G::Contextual, "contextual/building/area_density", "dimensionless",
                         "attribute:household_size"));
  out.push_back(metadata("appliances_owned", G::Contextual, "contextual/building/plug_load", "dimensionless",
                         "attribute:appliances_owned"));
  out.push_back(metadata("construction_year", G::Contextual, "contextual/building/age", "year",
                         "attribute:construction_year"));
  append(out, behavioral_common());
  out.push_back(metadata("residents", G::Behavioral, "behavioral/cooking/number_of_inhabitants", "dimensionless",
                         "attribute:residents"));
  out.push_back(usage("kitchen_activity", "behavioral/cooking", "kitchen"));
  out.push_back(usage("personal_grooming", "behavioral/personal_hygiene", "grooming"));
  out.push_back(usage("cleaning", "behavioral/social_activities", "cleaning"));
  out.push_back(usage("entertainment", "behavioral/social_activities", "entertainment"));
  out.push_back(usage("work_at_home", "behavioral/work_schedule", "work_at_home"));
  out.push_back(usage("heating", "behavioral/heating", "heating"));
  out.push_back(usage("bedroom_activity", "behavioral/work_schedule", "bedroom"));
  return out;
}

std::vector<FeatureDescriptor> synthetic(const std::vector<HourlyFrame>& frames) {
  std::vector<FeatureDescriptor> out = consumption();
  append(out, submeter_channel("kitchen"));
  append(out, time_features());
  append(out, geo_features(frames, true));
  append(out, solar_features());
  append(out, behavioral_common());
  out.push_back(usage("kitchen_activity", "behavioral/cooking", "kitchen"));
  return out;
}

}  // namespace

std::vector<FeatureDescriptor> dataset_inventory(DatasetId dataset, const std::vector<HourlyFrame>& frames) {
  switch (dataset) {
    case DatasetId::Hue: return hue(frames);
    case DatasetId::Uci: return uci(frames);
    case DatasetId::Refit: return refit(frames);
    case DatasetId::Synthetic: return synthetic(frames);
  }
  throw std::invalid_argument("unknown dataset");
}

std::vector<FeatureDescriptor> unavailable_descriptors() {
  auto d = metadata("house_activity_metadata", G::Behavioral, "behavioral/work_schedule", "dimensionless",
                    "unavailable");
  return {d};
}

std::vector<FeatureDescriptor> raw_only(const std::vector<FeatureDescriptor>& all) {
  std::vector<FeatureDescriptor> out;
  for (const auto& d : all) {
    if (d.group == G::Domain && d.provenance != P::Engineered) out.push_back(d);
  }
  return out;
}

}  // namespace gridfeat
