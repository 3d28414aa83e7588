#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gridfeat/inventory.hpp"
#include "gridfeat/schema.hpp"

using namespace gridfeat;

namespace {

std::set<std::string> child_labels(const TaxonomyNode& n) {
  std::set<std::string> out;
  for (const auto& c : n.children) out.insert(c.label);
  return out;
}

FeatureDescriptor lag24() {
  FeatureDescriptor d;
  d.name = "lag24";
  d.group = FeatureGroup::Domain;
  d.taxonomy_path = "domain/household/energy";
  d.unit = "kWh";
  d.provenance = Provenance::Engineered;
  d.leakage_horizon_hours = 24;
  d.recipe = "target:lag:24";
  return d;
}

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

std::size_t count_group(const std::vector<FeatureDescriptor>& ds, FeatureGroup g) {
  return std::count_if(ds.begin(), ds.end(), [&](const FeatureDescriptor& d) { return d.group == g; });
}

}  // namespace

TEST(Taxonomy, RootHasThreeGroups) {
  const auto* root = Taxonomy::embedded().lookup("");
  ASSERT_NE(root, nullptr);
  ASSERT_EQ(root->children.size(), 3u);
  EXPECT_EQ(root->children[0].path, "domain");
  EXPECT_EQ(root->children[1].path, "contextual");
  EXPECT_EQ(root->children[2].path, "behavioral");
}

TEST(Taxonomy, CookingSubtree) {
  const auto* cooking = Taxonomy::embedded().lookup("behavioral/cooking");
  ASSERT_NE(cooking, nullptr);
  EXPECT_EQ(child_labels(*cooking),
            (std::set<std::string>{"number of inhabitants", "gender", "geolocation", "culture"}));
}

TEST(Taxonomy, UnknownPathIsNotFound) {
  EXPECT_EQ(Taxonomy::embedded().lookup("domain/teleportation"), nullptr);
  EXPECT_EQ(Taxonomy::embedded().lookup("Domain"), nullptr);
}

TEST(Taxonomy, FirstAndSecondLevelLabels) {
  const auto& t = Taxonomy::embedded();
  const std::set<std::string> domain = {"PV power plant measurements", "Electric vehicles", "Household Measurements",
                                        "wind power plant measurements"};
  const std::set<std::string> contextual = {"weather conditions", "building properties", "time", "geolocation"};
  const std::set<std::string> behavioral = {"wealth class", "social activities", "heating",        "age",
                                            "work schedule", "personal hygiene", "cooking"};
  auto labels = [&](const char* p) { return child_labels(*t.lookup(p)); };
  for (const auto& l : domain) EXPECT_TRUE(labels("domain").count(l)) << l;
  for (const auto& l : contextual) EXPECT_TRUE(labels("contextual").count(l)) << l;
  for (const auto& l : behavioral) EXPECT_TRUE(labels("behavioral").count(l)) << l;

  const std::set<std::string> weather = {"relative humidity", "temperature", "pressure", "wind",
                                         "visibility",        "precipitation", "cloud coverage"};
  for (const auto& l : weather) EXPECT_TRUE(labels("contextual/weather").count(l)) << l;
  const std::set<std::string> social = {"weekday", "weekend", "holidays", "near-holidays"};
  for (const auto& l : social) EXPECT_TRUE(labels("behavioral/social_activities").count(l)) << l;
}

TEST(Taxonomy, PathsAreUnique) {
  const auto paths = Taxonomy::embedded().paths();
  EXPECT_EQ(std::set<std::string>(paths.begin(), paths.end()).size(), paths.size());
}

TEST(Taxonomy, HygieneLeavesHaveNoAdapter) {
  const auto* n = Taxonomy::embedded().lookup("behavioral/personal_hygiene/bathtub_size");
  ASSERT_NE(n, nullptr);
  EXPECT_TRUE(n->no_adapter);
}

TEST(Taxonomy, JsonRoundTrip) {
  const auto& t = Taxonomy::embedded();
  EXPECT_EQ(Taxonomy::from_json(t.to_json()).paths(), t.paths());
}

TEST(Descriptor, ConsistentLagIsValid) { EXPECT_TRUE(validate_descriptor(lag24()).empty()); }

TEST(Descriptor, GroupPathMismatch) {
  auto d = lag24();
  d.taxonomy_path = "contextual/weather/temperature";
  EXPECT_TRUE(has_rule(validate_descriptor(d), "group_path_mismatch"));
}

TEST(Descriptor, EngineeredZeroHorizonIsLeakage) {
  auto d = lag24();
  d.name = "rolling_mean";
  d.recipe = "target:rolling_mean:24";
  d.leakage_horizon_hours = 0;
  EXPECT_TRUE(has_rule(validate_descriptor(d), "leakage"));
}

TEST(Descriptor, UnknownPathAndUnit) {
  auto d = lag24();
  d.taxonomy_path = "domain/teleportation";
  d.unit = "furlongs";
  const auto v = validate_descriptor(d);
  EXPECT_TRUE(has_rule(v, "unknown_path"));
  EXPECT_TRUE(has_rule(v, "bad_unit"));
}

TEST(Descriptor, JsonRoundTrip) {
  const auto all = dataset_inventory(DatasetId::Refit, {});
  EXPECT_EQ(descriptors_from_json(to_json(all)), all);
}

TEST(SelectFeatures, HueDomainHasEight) {
  const auto hue = dataset_inventory(DatasetId::Hue, {});
  const auto d = select_features(hue, {FeatureGroup::Domain}, true);
  EXPECT_EQ(d.size(), 8u);
  for (const auto& x : d) EXPECT_EQ(x.group, FeatureGroup::Domain);
}

TEST(SelectFeatures, AllGroupsIsIdentity) {
  const auto hue = dataset_inventory(DatasetId::Hue, {});
  EXPECT_EQ(select_features(hue, GroupSet::all(), true), hue);
}

TEST(SelectFeatures, RefitBehavioralWithoutSubmeters) {
  const auto refit = dataset_inventory(DatasetId::Refit, {});
  EXPECT_EQ(select_features(refit, {FeatureGroup::Behavioral}, false).size(), 14u);
  EXPECT_GT(select_features(refit, {FeatureGroup::Behavioral}, true).size(), 14u);
}

TEST(SelectFeatures, EmptyComboAndEmptyResultThrow) {
  const auto hue = dataset_inventory(DatasetId::Hue, {});
  EXPECT_THROW(select_features(hue, GroupSet{}, true), std::invalid_argument);
  std::vector<FeatureDescriptor> only_domain = select_features(hue, {FeatureGroup::Domain}, true);
  EXPECT_THROW(select_features(only_domain, {FeatureGroup::Behavioral}, true), std::invalid_argument);
}

TEST(SelectFeatures, IdempotentAndMonotone) {
  const auto refit = dataset_inventory(DatasetId::Refit, {});
  const std::vector<GroupSet> combos = {
      {FeatureGroup::Domain},
      {FeatureGroup::Contextual},
      {FeatureGroup::Behavioral},
      {FeatureGroup::Domain, FeatureGroup::Contextual},
      {FeatureGroup::Contextual, FeatureGroup::Behavioral},
      {FeatureGroup::Domain, FeatureGroup::Behavioral},
      GroupSet::all()};
  for (auto a : combos) {
    for (bool sub : {true, false}) {
      const auto ra = select_features(refit, a, sub);
      EXPECT_EQ(select_features(ra, a, sub), ra);
      for (auto b : combos) {
        if (!a.subset_of(b)) continue;
        const auto rb = select_features(refit, b, sub);
        for (const auto& d : ra) EXPECT_NE(std::find(rb.begin(), rb.end(), d), rb.end());
      }
    }
  }
}

TEST(Inventory, EveryDescriptorValidates) {
  for (auto id : {DatasetId::Hue, DatasetId::Uci, DatasetId::Refit, DatasetId::Synthetic}) {
    for (const auto& d : dataset_inventory(id, {})) {
      EXPECT_TRUE(validate_descriptor(d).empty()) << to_string(id) << " " << d.name;
    }
  }
  for (const auto& d : unavailable_descriptors()) EXPECT_TRUE(validate_descriptor(d).empty()) << d.name;
}

TEST(Inventory, HueHasNoSubmeterOrKitchen) {
  for (const auto& d : dataset_inventory(DatasetId::Hue, {})) {
    EXPECT_FALSE(d.submeter) << d.name;
    EXPECT_NE(d.name, "kitchen_activity");
  }
}

TEST(Inventory, HouseActivityMetadataHasNoAdapter) {
  const auto u = unavailable_descriptors();
  ASSERT_TRUE(std::any_of(u.begin(), u.end(), [](const auto& d) { return d.name == "house_activity_metadata"; }));
  for (auto id : {DatasetId::Hue, DatasetId::Uci, DatasetId::Refit, DatasetId::Synthetic}) {
    for (const auto& d : dataset_inventory(id, {})) EXPECT_NE(d.name, "house_activity_metadata");
  }
}

TEST(Inventory, RawOnlyExcludesEngineered) {
  const auto refit = dataset_inventory(DatasetId::Refit, {});
  const auto raw = raw_only(refit);
  ASSERT_FALSE(raw.empty());
  for (const auto& d : raw) {
    EXPECT_EQ(d.group, FeatureGroup::Domain);
    EXPECT_NE(d.provenance, Provenance::Engineered);
  }
  EXPECT_LT(raw.size(), count_group(refit, FeatureGroup::Domain));
}

TEST(GroupSet, ParseAndPrint) {
  const auto g = GroupSet::parse("domain,contextual");
  EXPECT_TRUE(g.contains(FeatureGroup::Domain));
  EXPECT_FALSE(g.contains(FeatureGroup::Behavioral));
  EXPECT_EQ(g.to_string(), "domain,contextual");
  EXPECT_THROW(GroupSet::parse("domain,weather"), std::invalid_argument);
}

TEST(DatasetDescriptor, NativeIntervals) {
  EXPECT_EQ(DatasetDescriptor::defaults(DatasetId::Refit).native_interval_seconds, 8);
  EXPECT_EQ(DatasetDescriptor::defaults(DatasetId::Uci).native_interval_seconds, 60);
  EXPECT_EQ(DatasetDescriptor::defaults(DatasetId::Hue).native_interval_seconds, 3600);
  auto d = DatasetDescriptor::defaults(DatasetId::Uci);
  d.native_interval_seconds = 8;
  EXPECT_THROW(d.validate(), std::invalid_argument);
}
