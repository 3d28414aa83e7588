#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gridfeat {

/// First-level split of the feature taxonomy.
enum class FeatureGroup : std::uint8_t { Domain = 0, Contextual = 1, Behavioral = 2 };

inline constexpr std::array<FeatureGroup, 3> kAllGroups = {
    FeatureGroup::Domain, FeatureGroup::Contextual, FeatureGroup::Behavioral};

std::string_view to_string(FeatureGroup group);
std::optional<FeatureGroup> parse_group(std::string_view text);

/// Small value set over FeatureGroup, used for ablation combinations.
class GroupSet {
 public:
  constexpr GroupSet() = default;
  constexpr GroupSet(std::initializer_list<FeatureGroup> groups) {
    for (auto g : groups) insert(g);
  }
  static constexpr GroupSet all() {
    return {FeatureGroup::Domain, FeatureGroup::Contextual, FeatureGroup::Behavioral};
  }

  constexpr void insert(FeatureGroup g) { bits_ |= bit(g); }
  constexpr bool contains(FeatureGroup g) const { return (bits_ & bit(g)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(GroupSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool operator==(const GroupSet&) const = default;

  /// Comma-separated lowercase names in Domain, Contextual, Behavioral order.
  std::string to_string() const;
  /// Parses "domain,contextual"; throws std::invalid_argument on unknown names.
  static GroupSet parse(std::string_view text);

 private:
  static constexpr std::uint8_t bit(FeatureGroup g) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(g));
  }
  std::uint8_t bits_ = 0;
};

enum class DType : std::uint8_t { Numeric, Boolean, Categorical };
enum class Provenance : std::uint8_t { Measured, Engineered, Metadata };

std::string_view to_string(DType dtype);
std::string_view to_string(Provenance provenance);
DType parse_dtype(std::string_view text);
Provenance parse_provenance(std::string_view text);

struct TaxonomyNode {
  std::string path;   // slash-delimited slug path, "" for the root
  std::string label;  // display label
  bool no_adapter = false;
  bool extension = false;  // added beside the published tree to host artifact features
  std::vector<TaxonomyNode> children;

  const TaxonomyNode* child(std::string_view slug) const;
  std::string_view slug() const;
};

/// Immutable feature taxonomy. The shipped tree lives in data/taxonomy.json.
class Taxonomy {
 public:
  static const Taxonomy& embedded();
  static Taxonomy from_json(const nlohmann::json& doc);

  const TaxonomyNode& root() const { return root_; }

  /// Returns nullptr when the path is not part of the tree.
  const TaxonomyNode* lookup(std::string_view path) const;

  /// Every node path in depth-first order, root excluded.
  std::vector<std::string> paths() const;

  nlohmann::json to_json() const;

 private:
  TaxonomyNode root_;
};

/// A named, group-tagged column definition.
///
/// `recipe` tells the feature builder how to compute the column (see
/// featurize.hpp for the grammar). `deterministic` marks calendar and
/// astronomy features, which are known ahead of time and may use a zero
/// leakage horizon.
struct FeatureDescriptor {
  std::string name;
  FeatureGroup group = FeatureGroup::Domain;
  std::string taxonomy_path;
  DType dtype = DType::Numeric;
  std::string unit = "dimensionless";
  Provenance provenance = Provenance::Measured;
  int leakage_horizon_hours = 1;
  bool submeter = false;
  bool deterministic = false;
  std::string recipe;
  std::vector<std::string> categories;  // categorical dtype only

  bool operator==(const FeatureDescriptor&) const = default;
};

struct Violation {
  std::string rule;  // group_path_mismatch, unknown_path, bad_unit, leakage, ...
  std::string message;
};

/// Units accepted on descriptors.
std::span<const std::string_view> known_units();

/// Returns every violated invariant; empty means the descriptor is valid.
std::vector<Violation> validate_descriptor(const FeatureDescriptor& descriptor,
                                           const Taxonomy& taxonomy = Taxonomy::embedded());

/// Descriptors whose group is in `combo`, optionally without submeter-derived
/// ones. Input order is preserved. Throws std::invalid_argument when `combo`
/// is empty or nothing survives.
std::vector<FeatureDescriptor> select_features(const std::vector<FeatureDescriptor>& all,
                                               GroupSet combo, bool include_submeter);

nlohmann::json to_json(const FeatureDescriptor& descriptor);
FeatureDescriptor descriptor_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const std::vector<FeatureDescriptor>& descriptors);
std::vector<FeatureDescriptor> descriptors_from_json(const nlohmann::json& doc);

enum class DatasetId : std::uint8_t { Hue, Uci, Refit, Synthetic };

std::string_view to_string(DatasetId id);
DatasetId parse_dataset_id(std::string_view text);

struct DatasetDescriptor {
  DatasetId id = DatasetId::Synthetic;
  std::vector<std::string> household_ids;  // empty: discover from files
  int native_interval_seconds = 3600;
  std::string timezone = "UTC";
  double latitude = 0.0;
  double longitude = 0.0;
  std::string country;
  std::string region;  // holiday calendar key
  bool has_submeters = false;

  /// Location, zone, interval and region for each supported dataset.
  static DatasetDescriptor defaults(DatasetId id);

  /// Throws std::invalid_argument when the native interval does not match the dataset.
  void validate() const;
};

nlohmann::json to_json(const DatasetDescriptor& descriptor);

}  // namespace gridfeat
