#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "gridfeat/csv.hpp"
#include "gridfeat/ingest.hpp"
#include "gridfeat/timezone.hpp"
#include "test_support.hpp"

using namespace gridfeat;
namespace fs = std::filesystem;

namespace {

RawSeries power_series(std::int64_t start, int step, std::size_t count, Unit unit, const std::function<double(std::size_t)>& v) {
  RawSeries s;
  s.unit = unit;
  s.sample_interval_seconds = step;
  for (std::size_t i = 0; i < count; ++i) {
    s.timestamps.push_back(start + static_cast<std::int64_t>(i) * step);
    s.values.push_back(v(i));
  }
  return s;
}

// Step integration sample by sample: each reading is held until the next one.
double step_energy_kwh(const RawSeries& s, std::int64_t from, std::int64_t to) {
  double joules = 0.0;
  for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
    const auto t0 = s.timestamps[i];
    const auto t1 = i + 1 < s.timestamps.size() ? s.timestamps[i + 1] : t0 + s.sample_interval_seconds;
    const auto a = std::max(t0, from), b = std::min(t1, to);
    if (b > a) joules += s.values[i] * static_cast<double>(b - a);
  }
  return joules / 3.6e6;
}

}  // namespace

TEST(Resample, ConstantKilowattForOneHour) {
  const auto s = power_series(3600 * 100, 60, 60, Unit::Kilowatt, [](std::size_t) { return 1.0; });
  const auto h = resample_to_hourly(s);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h.first_hour, 100);
  EXPECT_FALSE(h.missing[0]);
  EXPECT_NEAR(h.values[0], 1.0, 1e-12);
}

TEST(Resample, AlternatingEightSecondSamples) {
  const auto s = power_series(0, 8, 450, Unit::Watt, [](std::size_t i) { return i % 2 ? 1000.0 : 0.0; });
  double oracle = 0.0;
  for (std::size_t i = 0; i < 450; ++i) oracle += s.values[i] * 8.0 / 3.6e6;
  const auto h = resample_to_hourly(s);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_NEAR(oracle, 0.5, 1e-12);
  EXPECT_NEAR(h.values[0], oracle, 1e-12);
}

TEST(Resample, LongGapMarksHourMissing) {
  RawSeries s;
  s.unit = Unit::Watt;
  s.sample_interval_seconds = 60;
  for (int t = 0; t < 600; t += 60) {
    s.timestamps.push_back(t);
    s.values.push_back(500.0);
  }
  for (int t = 600 + 2700; t < 7200; t += 60) {
    s.timestamps.push_back(t);
    s.values.push_back(500.0);
  }
  const auto h = resample_to_hourly(s, 1800);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_TRUE(h.missing[0]);
  EXPECT_EQ(h.values[0], 0.0);
  EXPECT_FALSE(h.missing[1]);
}

TEST(Resample, EnergyUnitsAreSummed) {
  const auto s = power_series(0, 60, 120, Unit::WattHour, [](std::size_t) { return 20.0; });
  const auto h = resample_to_hourly(s);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_NEAR(h.values[0], 60 * 20.0 / 1000.0, 1e-12);
  EXPECT_NEAR(h.values[1], 60 * 20.0 / 1000.0, 1e-12);
}

TEST(Resample, LevelsAreTimeWeightedMeans) {
  const auto s = power_series(0, 60, 60, Unit::Volt, [](std::size_t i) { return i < 30 ? 230.0 : 240.0; });
  EXPECT_NEAR(resample_to_hourly(s).values[0], 235.0, 1e-12);
}

TEST(Resample, UnknownUnitRejected) {
  EXPECT_THROW(parse_unit("BTU"), std::invalid_argument);
  EXPECT_EQ(parse_unit("kW"), Unit::Kilowatt);
}

TEST(Resample, RejectsUnsortedTimestamps) {
  RawSeries s;
  s.timestamps = {10, 5};
  s.values = {1, 1};
  EXPECT_THROW(resample_to_hourly(s), std::invalid_argument);
}

TEST(Resample, EnergyConservationOnObservedDays) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> step(1, 120);
  std::uniform_real_distribution<double> watts(0.0, 4000.0);
  RawSeries s;
  s.unit = Unit::Watt;
  s.sample_interval_seconds = 8;
  const std::int64_t start = 86400 * 16000;
  for (std::int64_t t = start; t < start + 3 * 86400; t += step(rng)) {
    s.timestamps.push_back(t);
    s.values.push_back(watts(rng));
  }
  const auto h = resample_to_hourly(s);
  for (int day = 0; day < 2; ++day) {
    double sum = 0.0;
    bool observed = true;
    for (int k = 0; k < 24; ++k) {
      const auto idx = static_cast<std::size_t>(start / 3600 + day * 24 + k - h.first_hour);
      observed = observed && !h.missing[idx];
      sum += h.values[idx];
    }
    ASSERT_TRUE(observed);
    const auto oracle = step_energy_kwh(s, start + day * 86400, start + (day + 1) * 86400);
    EXPECT_NEAR(sum, oracle, 1e-9 * oracle);
  }
}

TEST(Resample, NeverInventsHours) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> step(1, 5000);
    RawSeries s;
    s.unit = trial % 2 ? Unit::Watt : Unit::WattHour;
    s.sample_interval_seconds = 60;
    for (std::int64_t t = 0; t < 86400 * 2; t += step(rng)) {
      s.timestamps.push_back(t);
      s.values.push_back(trial % 3 == 0 && t % 7 == 0 ? std::nan("") : 100.0);
    }
    std::set<std::int64_t> with_sample;
    for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
      if (!std::isnan(s.values[i])) with_sample.insert(s.timestamps[i] / 3600);
    }
    const auto h = resample_to_hourly(s, 900);
    std::size_t present = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h.missing[k]) {
        EXPECT_EQ(h.values[k], 0.0);
        continue;
      }
      ++present;
      EXPECT_TRUE(with_sample.count(h.first_hour + static_cast<std::int64_t>(k)));
    }
    EXPECT_LE(present, with_sample.size());
  }
}

TEST(FrameCache, RoundTrip) {
  test::TempDir dir;
  auto r = synth_household([] {
    SynthSpec s;
    s.days = 21;
    return s;
  }());
  r.frame.target_missing[5] = 1;
  r.frame.target_kwh[5] = 0.0;
  r.frame.attributes["note"] = "a,b";
  save_frame(r.frame, dir.str());
  EXPECT_EQ(cached_households(dir.str()), std::vector<std::string>{r.frame.household_id});
  EXPECT_EQ(load_frame(dir.str(), r.frame.household_id), r.frame);
}

TEST(FrameCache, MissingFileNamesPath) {
  test::TempDir dir;
  try {
    load_frame(dir.str(), "nobody");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("nobody"), std::string::npos);
  }
}

TEST(Frame, ValidateCatchesNegativeTarget) {
  auto r = synth_household(SynthSpec{});
  r.frame.target_kwh[3] = -0.1;
  EXPECT_THROW(r.frame.validate(), std::invalid_argument);
}

// --- loaders -------------------------------------------------------------------

TEST(LoadUci, MinuteKilowattsToHourlyEnergy) {
  test::TempDir dir;
  std::ofstream out(dir.path() / "household_power_consumption.txt");
  out << "Date;Time;Global_active_power;Global_reactive_power;Voltage;Global_intensity;Sub_metering_1;"
         "Sub_metering_2;Sub_metering_3\n";
  // 2010-01-12 (winter, UTC+1): two full local hours.
  for (int m = 0; m < 120; ++m) {
    out << "12/1/2010;" << (10 + m / 60) << ":" << (m % 60 < 10 ? "0" : "") << m % 60 << ":00;"
        << (m < 60 ? "1.200" : "?") << ";0.100;240.0;5.0;" << (m < 60 ? "2" : "0") << ";0;17\n";
  }
  out.close();
  const auto frames = load_dataset(DatasetDescriptor::defaults(DatasetId::Uci), dir.str());
  ASSERT_EQ(frames.size(), 1u);
  const auto& f = frames[0];
  EXPECT_EQ(f.timezone, "Europe/Paris");
  const auto expected_hour = TimeZone("Europe/Paris").from_local(2010, 1, 12, 10, 0, 0).value() / 3600;
  EXPECT_EQ(f.first_hour, expected_hour);
  EXPECT_NEAR(f.target_kwh[0], 60 * 1.2 / 60.0, 1e-12);
  const auto* sub1 = f.channel("submeter_1");
  const auto* sub3 = f.channel("submeter_3");
  ASSERT_NE(sub1, nullptr);
  ASSERT_NE(sub3, nullptr);
  EXPECT_TRUE(sub1->submeter);
  EXPECT_NEAR(sub1->values[0], 60 * 2 / 1000.0, 1e-12);
  EXPECT_NEAR(sub3->values[0], 60 * 17 / 1000.0, 1e-12);
  EXPECT_EQ(f.attributes.at("activity:submeter_1"), "kitchen");
}

TEST(LoadUci, MalformedRowsBeyondToleranceFail) {
  test::TempDir dir;
  std::ofstream out(dir.path() / "household_power_consumption.txt");
  out << "Date;Time;Global_active_power;Global_reactive_power;Voltage;Global_intensity;Sub_metering_1;"
         "Sub_metering_2;Sub_metering_3\n";
  for (int m = 0; m < 60; ++m) out << "12/1/2010;10:" << (m < 10 ? "0" : "") << m << ":00;1;0;240;5;0;0;0\n";
  for (int m = 0; m < 5; ++m) out << "garbage;row\n";
  out.close();
  LoadOptions strict;
  strict.malformed_tolerance = 0.01;
  EXPECT_THROW(load_dataset(DatasetDescriptor::defaults(DatasetId::Uci), dir.str(), strict), std::runtime_error);
  LoadOptions lax;
  lax.malformed_tolerance = 0.2;
  LoadReport report;
  EXPECT_NO_THROW(load_dataset(DatasetDescriptor::defaults(DatasetId::Uci), dir.str(), lax, &report));
  EXPECT_EQ(report.malformed, 5u);
}

TEST(LoadUci, MissingFileIsNamed) {
  test::TempDir dir;
  try {
    load_dataset(DatasetDescriptor::defaults(DatasetId::Uci), dir.str());
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("household_power_consumption.txt"), std::string::npos);
  }
}

TEST(LoadHue, HourlyEnergyPassesThrough) {
  test::TempDir dir;
  {
    std::ofstream meta(dir.path() / "Residential_Info.csv");
    meta << "house_id,weather_station,house_type,facing,rental_units,ev_battery_kwh,heat_pump\n";
    meta << "3,YVR,bungalow,South,0,,1\n";
    meta << "5,YVR,duplex,North,1,60,0\n";
    std::ofstream weather(dir.path() / "Weather_YVR.csv");
    weather << "date,hour,temperature,humidity,pressure,weather\n";
    for (int h = 0; h < 24; ++h) weather << "2016-03-01," << h << ",5.5,80,101.2," << (h < 12 ? "Clear" : "Rain") << "\n";
    for (const char* id : {"3", "5"}) {
      std::ofstream e(dir.path() / (std::string("Residential_") + id + ".csv"));
      e << "date,hour,energy_kWh\n";
      for (int h = 0; h < 24; ++h) e << "2016-03-01," << h << "," << (h == 0 ? "0.734" : "1.5") << "\n";
    }
  }
  const auto frames = load_dataset(DatasetDescriptor::defaults(DatasetId::Hue), dir.str());
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].household_id, "3");
  EXPECT_EQ(frames[0].target_kwh[0], 0.734);
  EXPECT_EQ(frames[0].size(), 24u);
  EXPECT_EQ(frames[0].attributes.at("building_type"), "bungalow");
  EXPECT_EQ(frames[0].attributes.at("ev_owner"), "0");
  EXPECT_EQ(frames[1].attributes.at("ev_owner"), "1");
  EXPECT_EQ(frames[0].attributes.at("hvac_heat_pump"), "1");
  const auto* temp = frames[0].channel("temperature");
  const auto* cloud = frames[0].channel("cloud_cover");
  ASSERT_NE(temp, nullptr);
  ASSERT_NE(cloud, nullptr);
  EXPECT_EQ(temp->values[0], 5.5);
  EXPECT_EQ(cloud->values[0], 0.0);
  EXPECT_GT(cloud->values[20], 0.0);
  const auto expected = TimeZone("America/Vancouver").from_local(2016, 3, 1, 0, 0, 0).value() / 3600;
  EXPECT_EQ(frames[0].first_hour, expected);
}

TEST(LoadHue, MissingRootFileIsNamed) {
  test::TempDir dir;
  try {
    load_dataset(DatasetDescriptor::defaults(DatasetId::Hue), dir.str());
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("Residential_Info.csv"), std::string::npos);
  }
}

TEST(LoadRefit, EightSecondWattsAreIntegrated) {
  test::TempDir dir;
  {
    std::ofstream meta(dir.path() / "refit_metadata.csv");
    meta << "house_id,residents,building_type,appliance_1,appliance_2,appliance_3,appliance_4,appliance_5,"
            "appliance_6,appliance_7,appliance_8,appliance_9\n";
    meta << "1,2,detached,Fridge,Kettle,Washing Machine,Television,Computer,Microwave,Toaster,Lamp,Dishwasher\n";
    std::ofstream data(dir.path() / "CLEAN_House1.csv");
    data << "Time,Unix,Aggregate,Appliance1,Appliance2,Appliance3,Appliance4,Appliance5,Appliance6,Appliance7,"
            "Appliance8,Appliance9,Issues\n";
    const std::int64_t start = 1380585600;  // 2013-10-01T00:00:00Z
    for (int i = 0; i < 900; ++i) {
      data << "x," << start + 8 * i << "," << (i % 2 ? 1000 : 0) << ",50," << (i < 450 ? 3000 : 0)
           << ",0,0,0,0,0,0,0,0\n";
    }
  }
  const auto frames = load_dataset(DatasetDescriptor::defaults(DatasetId::Refit), dir.str());
  ASSERT_EQ(frames.size(), 1u);
  const auto& f = frames[0];
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f.target_kwh[0], 0.5, 1e-12);
  EXPECT_NEAR(f.target_kwh[1], 0.5, 1e-12);
  const auto* kettle = f.channel("appliance_2");
  ASSERT_NE(kettle, nullptr);
  EXPECT_NEAR(kettle->values[0], 3.0, 1e-12);
  EXPECT_NEAR(kettle->values[1], 0.0, 1e-12);
  EXPECT_EQ(f.attributes.at("activity:appliance_2"), "kitchen");
  EXPECT_EQ(f.attributes.at("activity:appliance_3"), "cleaning");
  EXPECT_EQ(f.attributes.at("residents"), "2");
  EXPECT_EQ(DatasetDescriptor::defaults(DatasetId::Refit).native_interval_seconds, 8);
}

TEST(LoadDataset, SyntheticIsNotAFileLayout) {
  EXPECT_THROW(load_dataset(DatasetDescriptor::defaults(DatasetId::Synthetic), "/tmp"), std::invalid_argument);
}

TEST(ApplianceActivity, Keywords) {
  EXPECT_EQ(activity_for_appliance("Kettle"), "kitchen");
  EXPECT_EQ(activity_for_appliance("Tumble Dryer"), "cleaning");
  EXPECT_EQ(activity_for_appliance("TV/Satellite"), "entertainment");
  EXPECT_EQ(activity_for_appliance("Desktop Computer"), "work_at_home");
  EXPECT_EQ(activity_for_appliance("Fridge-Freezer"), "");
}

// --- synthetic households ------------------------------------------------------

TEST(Synth, DegenerateGeneratorIsConstant) {
  SynthSpec s;
  s.noise_std_kwh = 0.0;
  s.meal_spike_kwh = 0.0;
  s.level_std = 0.0;
  s.weekly_weekend_factor = 1.0;
  s.daily_profile.fill(1.0);
  const auto r = synth_household(s);
  for (double v : r.frame.target_kwh) EXPECT_DOUBLE_EQ(v, s.base_load_kwh);
}

TEST(Synth, SameSeedSameFrame) {
  SynthSpec s;
  s.seed = 99;
  EXPECT_EQ(synth_household(s).frame, synth_household(s).frame);
  auto t = s;
  t.seed = 100;
  EXPECT_NE(synth_household(s).frame.target_kwh, synth_household(t).frame.target_kwh);
}

TEST(Synth, MealSpikeRaisesEveningMean) {
  SynthSpec s;
  s.meal_spike_kwh = 1.0;
  s.noise_std_kwh = 0.0;
  s.level_std = 0.0;
  s.weekly_weekend_factor = 1.0;
  s.daily_profile.fill(1.0);
  const auto r = synth_household(s);
  double evening = 0.0, night = 0.0;
  int ne = 0, nn = 0;
  for (std::size_t i = 0; i < r.frame.size(); ++i) {
    const auto hour = static_cast<int>(((r.frame.hour(i) % 24) + 24) % 24);
    if (hour >= 18 && hour < 21) evening += r.frame.target_kwh[i], ++ne;
    if (hour >= 2 && hour < 5) night += r.frame.target_kwh[i], ++nn;
  }
  EXPECT_NEAR(evening / ne - night / nn, 1.0, 1e-12);
}

TEST(Synth, KitchenChannelCarriesMealEnergy) {
  const auto r = synth_household(SynthSpec{});
  const auto* kitchen = r.frame.channel("kitchen");
  ASSERT_NE(kitchen, nullptr);
  EXPECT_TRUE(kitchen->submeter);
  for (std::size_t i = 0; i < r.frame.size(); ++i) {
    EXPECT_DOUBLE_EQ(kitchen->values[i], r.truth.meal[i] ? r.truth.spec.meal_spike_kwh : 0.0);
  }
}

TEST(Synth, FrameShapeAndTruth) {
  SynthSpec s;
  s.days = 30;
  const auto r = synth_household(s);
  EXPECT_EQ(r.frame.size(), 30u * 24u);
  EXPECT_EQ(r.frame.first_hour, s.start_day * 24);
  EXPECT_NO_THROW(r.frame.validate());
  for (double v : r.frame.target_kwh) EXPECT_GE(v, 0.0);
  EXPECT_EQ(r.truth.expected_kwh.size(), r.frame.size());
  EXPECT_FALSE(r.truth.signal_groups.empty());
}

TEST(Synth, InvalidSpecRejected) {
  SynthSpec s;
  s.days = 20;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.days = 30;
  s.meal_spike_kwh = -1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}
