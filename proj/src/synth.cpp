#include <cmath>
#include <random>
#include <stdexcept>

#include "gridfeat/ingest.hpp"

namespace gridfeat {

void SynthSpec::validate() const {
  if (days < 21) throw std::invalid_argument("synthetic days must be >= 21");
  if (base_load_kwh < 0 || weekly_weekend_factor < 0 || meal_spike_kwh < 0 || noise_std_kwh < 0 ||
      level_std < 0) {
    throw std::invalid_argument("synthetic magnitudes must be >= 0");
  }
  for (double w : daily_profile) {
    if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("daily profile weights must be >= 0");
  }
  if (!(level_persistence >= 0 && level_persistence < 1)) {
    throw std::invalid_argument("level persistence must lie in [0, 1)");
  }
}

namespace {

bool in_meal_window(int hour) {
  return (hour >= 6 && hour < 9) || (hour >= 11 && hour < 15) || (hour >= 18 && hour < 21);
}

}  // namespace

SynthResult synth_household(const SynthSpec& spec) {
  spec.validate();
  const auto defaults = DatasetDescriptor::defaults(DatasetId::Synthetic);
  const std::size_t n = static_cast<std::size_t>(spec.days) * 24;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  SynthResult out;
  auto& frame = out.frame;
  auto& truth = out.truth;
  truth.spec = spec;
  truth.level.resize(n);
  truth.expected_kwh.resize(n);
  truth.meal.resize(n);

  frame.household_id = "synthetic-" + std::to_string(spec.seed);
  frame.dataset = DatasetId::Synthetic;
  frame.timezone = defaults.timezone;
  frame.latitude = defaults.latitude;
  frame.longitude = defaults.longitude;
  frame.country = defaults.country;
  frame.region = defaults.region;
  frame.first_hour = spec.start_day * 24;
  frame.target_kwh.resize(n);
  frame.target_missing.assign(n, 0);

  Channel kitchen;
  kitchen.name = "kitchen";
  kitchen.unit = "kWh";
  kitchen.submeter = true;
  kitchen.values.resize(n);
  kitchen.missing.assign(n, 0);

  const double phi = spec.level_persistence;
  const double innovation = spec.level_std * std::sqrt(1.0 - phi * phi);
  double level = spec.level_std * normal(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) level = phi * level + innovation * normal(rng);
    const auto day = spec.start_day + static_cast<std::int64_t>(i / 24);
    const int hour = static_cast<int>(i % 24);
    const int weekday = static_cast<int>(((day + 3) % 7 + 7) % 7);  // 1970-01-01 was a Thursday
    const bool weekend = weekday >= 5;
    const bool meal = in_meal_window(hour);

    const double expected = (spec.base_load_kwh + level) * spec.daily_profile[hour] *
                                (weekend ? spec.weekly_weekend_factor : 1.0) +
                            (meal ? spec.meal_spike_kwh : 0.0);
    const double noise = spec.noise_std_kwh * normal(rng);
    truth.level[i] = level;
    truth.expected_kwh[i] = expected;
    truth.meal[i] = meal ? 1 : 0;
    frame.target_kwh[i] = std::max(0.0, expected + noise);
    kitchen.values[i] = meal ? spec.meal_spike_kwh : 0.0;
  }
  frame.channels.push_back(std::move(kitchen));
  frame.attributes["activity:kitchen"] = "kitchen";

  if (spec.level_std > 0 || spec.meal_spike_kwh > 0) truth.signal_groups.push_back(FeatureGroup::Domain);
  truth.signal_groups.push_back(FeatureGroup::Contextual);
  if (spec.meal_spike_kwh > 0) truth.signal_groups.push_back(FeatureGroup::Behavioral);
  frame.validate();
  return out;
}

}  // namespace gridfeat
