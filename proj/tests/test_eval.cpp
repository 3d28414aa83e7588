#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gridfeat/config.hpp"
#include "gridfeat/eval.hpp"
#include "gridfeat/inventory.hpp"
#include "test_support.hpp"

using namespace gridfeat;

// --- metrics ---------------------------------------------------------------------

TEST(Mpe, Examples) {
  EXPECT_EQ(mpe(std::vector<double>{1.0, 2.5}, std::vector<double>{1.0, 2.5}), 0.0);
  EXPECT_EQ(mpe(std::vector<double>{0.0}, std::vector<double>{0.0}), 0.0);
  EXPECT_DOUBLE_EQ(mpe(std::vector<double>{1, 3}, std::vector<double>{2, 3}), 25.0);
}

TEST(Mpe, Errors) {
  EXPECT_THROW(mpe(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(mpe(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(mpe(std::vector<double>{1}, std::vector<double>{1}, 0.0), std::invalid_argument);
}

TEST(Mpe, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(20), f(20);
    for (auto& v : a) v = u(rng);
    for (auto& v : f) v = u(rng);
    const double m = mpe(a, f);
    EXPECT_DOUBLE_EQ(m, mpe(f, a));
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 100.0);
  }
}

TEST(Mse, Examples) {
  EXPECT_EQ(mse(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(mse(std::vector<double>{0, 2}, std::vector<double>{1, 0}), 2.5);
  const std::vector<double> a = {0.5, 1.5, 2.0}, f = {1.0, 1.0, 1.0};
  std::vector<double> a3(3), f3(3);
  for (int i = 0; i < 3; ++i) a3[i] = 3 * a[i], f3[i] = 3 * f[i];
  EXPECT_NEAR(mse(a3, f3), 9 * mse(a, f), 1e-12);
}

TEST(Evaluate, CarriesCountAndEpsilon) {
  const auto m = evaluate(std::vector<double>{1, 3}, std::vector<double>{2, 3}, 1e-3);
  EXPECT_EQ(m.n_samples, 2u);
  EXPECT_EQ(m.epsilon, 1e-3);
  EXPECT_DOUBLE_EQ(m.mpe, 25.0);
  EXPECT_DOUBLE_EQ(m.mse, 0.5);
}

// --- grid layout -----------------------------------------------------------------

TEST(AblationRows, HueHasEightRefitNine) {
  const auto hue = ablation_rows(false);
  const auto refit = ablation_rows(true);
  ASSERT_EQ(hue.size(), 8u);
  ASSERT_EQ(refit.size(), 9u);
  EXPECT_TRUE(hue[0].raw_only);
  EXPECT_EQ(hue[7].combo, GroupSet::all());
  EXPECT_FALSE(refit[8].include_submeter);
  EXPECT_EQ(refit[8].combo, GroupSet::all());
  std::vector<std::uint8_t> combos;
  for (std::size_t r = 1; r < 8; ++r) combos.push_back(hue[r].combo.bits());
  std::sort(combos.begin(), combos.end());
  EXPECT_EQ(combos, (std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7}));
}

namespace {

ReportTable small_grid(std::uint64_t seed, std::size_t jobs) {
  SynthSpec s;
  s.days = 30;
  s.seed = seed;
  const auto r = synth_household(s);
  const auto desc = dataset_inventory(DatasetId::Synthetic, {r.frame});
  AblationConfig cfg;
  cfg.models = {ModelKind::Linear, ModelKind::Gbt, ModelKind::SeasonalNaive};
  cfg.params.gbt.n_rounds = 20;
  cfg.has_submeters = true;
  cfg.jobs = jobs;
  cfg.explain_max_rows = 50;
  cfg.explain_background = 10;
  return run_ablation(DatasetId::Synthetic, std::vector<HourlyFrame>{r.frame}, desc, cfg);
}

}  // namespace

TEST(RunAblation, SyntheticGridShape) {
  const auto t = small_grid(7, 4);
  ASSERT_EQ(t.rows.size(), 9u);
  for (const auto& row : t.rows) {
    ASSERT_EQ(row.metrics.size(), 3u);
    for (const auto& m : row.metrics) {
      EXPECT_FALSE(m.failed) << row.spec.label << ": " << m.error;
      EXPECT_EQ(m.n_samples, t.rows[0].metrics[0].n_samples);
    }
  }
  ASSERT_TRUE(t.groups.has_value());
  EXPECT_LT(t.groups->local_accuracy_error, 1e-9);
  // the baseline ignores the row's selection, so every row agrees
  for (const auto& row : t.rows) EXPECT_EQ(row.metrics[2], t.rows[0].metrics[2]);
}

TEST(RunAblation, IndependentOfJobCount) {
  const auto a = small_grid(3, 1), b = small_grid(3, 6);
  EXPECT_EQ(render_report(a, ReportFormat::Csv), render_report(b, ReportFormat::Csv));
}

TEST(RunAblation, SingleRowFilter) {
  SynthSpec s;
  s.days = 30;
  const auto r = synth_household(s);
  const auto desc = dataset_inventory(DatasetId::Synthetic, {r.frame});
  AblationConfig cfg;
  cfg.models = {ModelKind::Gbt};
  cfg.params.gbt.n_rounds = 5;
  cfg.explain = false;
  cfg.only_groups = GroupSet::parse("domain,contextual");
  const auto t = run_ablation(DatasetId::Synthetic, std::vector<HourlyFrame>{r.frame}, desc, cfg);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].spec.combo, (GroupSet{FeatureGroup::Domain, FeatureGroup::Contextual}));
  EXPECT_FALSE(t.groups.has_value());
}

TEST(RunAblation, FailedCellDoesNotAbortGrid) {
  SynthSpec s;
  s.days = 30;
  const auto r = synth_household(s);
  auto desc = dataset_inventory(DatasetId::Synthetic, {r.frame});
  AblationConfig cfg;
  cfg.models = {ModelKind::Gbt, ModelKind::SeasonalNaive};
  cfg.params.gbt.n_rounds = 5;
  cfg.explain = false;
  cfg.has_submeters = true;
  // without a lag-24 column the baseline cannot be fitted
  desc.erase(std::remove_if(desc.begin(), desc.end(), [](const auto& d) { return d.name == "consumption_lag24"; }),
             desc.end());
  const auto t = run_ablation(DatasetId::Synthetic, std::vector<HourlyFrame>{r.frame}, desc, cfg);
  ASSERT_EQ(t.rows.size(), 9u);
  for (const auto& row : t.rows) {
    EXPECT_FALSE(row.metrics[0].failed);
    EXPECT_TRUE(row.metrics[1].failed);
    EXPECT_FALSE(row.metrics[1].error.empty());
  }
  const auto md = render_report(t, ReportFormat::Markdown);
  EXPECT_NE(md.find("Failed cells"), std::string::npos);
}

TEST(RunAblation, SplitIsChronologicalPerHousehold) {
  SynthSpec s;
  s.days = 30;
  auto a = synth_household(s).frame;
  s.seed = 8;
  auto b = synth_household(s).frame;
  b.household_id = "second";
  const auto desc = dataset_inventory(DatasetId::Synthetic, {a, b});
  const auto full = build_dataset_matrix({a, b}, desc, FeatureOptions{}, 2);
  const auto split = split_train_test(full);
  for (std::size_t h = 0; h < 2; ++h) {
    const auto rows = full.household_rows(h);
    const auto n_train = rows.size() * 8 / 10;
    std::vector<std::int64_t> expect_test;
    for (std::size_t i = n_train; i < rows.size(); ++i) expect_test.push_back(full.row_hours[rows[i]]);
    std::vector<std::int64_t> got;
    for (auto i : split.test.household_rows(h)) got.push_back(split.test.row_hours[i]);
    EXPECT_EQ(got, expect_test);
    for (auto i : split.train.household_rows(h)) EXPECT_LT(split.train.row_hours[i], expect_test.front());
  }
}

// --- reports ---------------------------------------------------------------------

TEST(Report, CsvRoundTripIsExact) {
  const auto t = small_grid(5, 3);
  const auto csv = render_report(t, ReportFormat::Csv);
  const auto back = parse_report_csv(csv);
  EXPECT_EQ(back.dataset, t.dataset);
  EXPECT_EQ(back.models, t.models);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(render_report(back, ReportFormat::Csv), csv);
}

TEST(Report, MarkdownColumnCount) {
  const auto t = small_grid(5, 3);
  const auto md = render_report(t, ReportFormat::Markdown);
  const auto start = md.find("| # |");
  const auto line = md.substr(start, md.find('\n', start) - start);
  const auto bars = std::count(line.begin(), line.end(), '|');
  EXPECT_EQ(bars - 1, static_cast<long>(2 * t.models.size() + 4));
  EXPECT_NE(md.find("**"), std::string::npos);
}

TEST(Report, EmptyGridIsHeaderOnly) {
  ReportTable t;
  t.models = {ModelKind::Gbt};
  const auto csv = render_report(t, ReportFormat::Csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  const auto md = render_report(t, ReportFormat::Markdown);
  EXPECT_NE(md.find("| # |"), std::string::npos);
  EXPECT_EQ(md.find("| 1 |"), std::string::npos);
}

TEST(Report, GroupsJsonShape) {
  const auto t = small_grid(5, 3);
  const auto desc = dataset_inventory(DatasetId::Synthetic, {synth_household(SynthSpec{}).frame});
  const auto doc = groups_json(t, desc);
  EXPECT_EQ(doc.at("total_features").get<std::size_t>(), desc.size());
  double sum = 0.0;
  for (const auto& [_, v] : doc.at("share_percent").items()) sum += v.get<double>();
  EXPECT_NEAR(sum, 100.0, 1e-9);
}

// --- config ----------------------------------------------------------------------

TEST(Config, DefaultsAndEcho) {
  const auto c = config_from_json(nlohmann::json::object());
  EXPECT_EQ(c.dataset, DatasetId::Synthetic);
  EXPECT_EQ(c.features.rolling_window, 24);
  EXPECT_EQ(c.epsilon, 1e-6);
  const auto echoed = to_json(c);
  const auto again = config_from_json(echoed);
  EXPECT_EQ(to_json(again), echoed);
}

TEST(Config, UnknownKeysRejectedAtEveryLevel) {
  for (const char* text : {R"({"datset": "hue"})", R"({"gbt": {"rounds": 3}})", R"({"features": {"window": 3}})",
                           R"({"features": {"schedule": {"brunch": [10, 12]}}})", R"({"synthetic": {"dayz": 30}})"}) {
    try {
      config_from_json(nlohmann::json::parse(text));
      FAIL() << text;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos) << e.what();
    }
  }
}

TEST(Config, ValuesAndSeedPropagation) {
  const auto c = config_from_json(nlohmann::json::parse(
      R"({"dataset": "refit", "seed": 11, "models": ["gbt"], "gbt": {"n_rounds": 7},
          "features": {"rolling_window": 12, "schedule": {"lunch": [12, 14]}}, "synthetic": {"days": 40}})"));
  EXPECT_EQ(c.dataset, DatasetId::Refit);
  EXPECT_EQ(c.models, std::vector<ModelKind>{ModelKind::Gbt});
  EXPECT_EQ(c.gbt.n_rounds, 7);
  EXPECT_EQ(c.features.rolling_window, 12);
  EXPECT_EQ(c.features.schedule.windows.at("lunch").start, 12);
  EXPECT_EQ(c.synthetic.days, 40);
  EXPECT_EQ(c.synthetic.seed, 11u);
  EXPECT_EQ(c.mlp.seed, 11u);
  EXPECT_TRUE(c.ablation_config().has_submeters);
}

TEST(Config, BadValuesRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"epsilon": 0})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"gbt": {"n_rounds": "many"}})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"dataset": "ecobee"})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"synthetic": {"days": 3}})")), std::invalid_argument);
}
