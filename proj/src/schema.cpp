#include "gridfeat/schema.hpp"

#include <algorithm>
#include <stdexcept>

#include "gridfeat/embedded_data.hpp"

namespace gridfeat {

using nlohmann::json;

std::string_view to_string(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::Domain: return "domain";
    case FeatureGroup::Contextual: return "contextual";
    case FeatureGroup::Behavioral: return "behavioral";
  }
  return "?";
}

std::optional<FeatureGroup> parse_group(std::string_view text) {
  for (auto g : kAllGroups) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

std::string GroupSet::to_string() const {
  std::string out;
  for (auto g : kAllGroups) {
    if (!contains(g)) continue;
    if (!out.empty()) out += ',';
    out += gridfeat::to_string(g);
  }
  return out;
}

GroupSet GroupSet::parse(std::string_view text) {
  GroupSet set;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto token = text.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      auto g = parse_group(token);
      if (!g) throw std::invalid_argument("unknown feature group '" + std::string(token) + "'");
      set.insert(*g);
    }
    start = end + 1;
  }
  return set;
}

std::string_view to_string(DType dtype) {
  switch (dtype) {
    case DType::Numeric: return "numeric";
    case DType::Boolean: return "boolean";
    case DType::Categorical: return "categorical";
  }
  return "?";
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Measured: return "measured";
    case Provenance::Engineered: return "engineered";
    case Provenance::Metadata: return "metadata";
  }
  return "?";
}

DType parse_dtype(std::string_view text) {
  for (auto d : {DType::Numeric, DType::Boolean, DType::Categorical}) {
    if (to_string(d) == text) return d;
  }
  throw std::invalid_argument("unknown dtype '" + std::string(text) + "'");
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::Measured, Provenance::Engineered, Provenance::Metadata}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown provenance '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Taxonomy

const TaxonomyNode* TaxonomyNode::child(std::string_view slug) const {
  for (const auto& c : children) {
    if (c.slug() == slug) return &c;
  }
  return nullptr;
}

std::string_view TaxonomyNode::slug() const {
  std::string_view p = path;
  auto pos = p.rfind('/');
  return pos == std::string_view::npos ? p : p.substr(pos + 1);
}

namespace {

TaxonomyNode parse_node(const json& doc, const std::string& parent_path) {
  TaxonomyNode node;
  const auto slug = doc.at("slug").get<std::string>();
  node.label = doc.at("label").get<std::string>();
  node.path = parent_path.empty() ? slug : parent_path + "/" + slug;
  node.no_adapter = doc.value("no_adapter", false);
  node.extension = doc.value("extension", false);
  if (doc.contains("children")) {
    for (const auto& c : doc.at("children")) node.children.push_back(parse_node(c, node.path));
  }
  return node;
}

json node_to_json(const TaxonomyNode& node) {
  json out;
  out["label"] = node.label;
  out["slug"] = std::string(node.slug());
  if (node.no_adapter) out["no_adapter"] = true;
  if (node.extension) out["extension"] = true;
  out["children"] = json::array();
  for (const auto& c : node.children) out["children"].push_back(node_to_json(c));
  return out;
}

void collect_paths(const TaxonomyNode& node, std::vector<std::string>& out) {
  for (const auto& c : node.children) {
    out.push_back(c.path);
    collect_paths(c, out);
  }
}

}  // namespace

const Taxonomy& Taxonomy::embedded() {
  static const Taxonomy instance = from_json(json::parse(embedded::taxonomy_json()));
  return instance;
}

Taxonomy Taxonomy::from_json(const json& doc) {
  Taxonomy t;
  t.root_ = parse_node(doc, "");
  if (t.root_.children.size() != kAllGroups.size()) {
    throw std::invalid_argument("taxonomy root must have exactly three children");
  }
  for (auto g : kAllGroups) {
    if (!t.root_.child(to_string(g))) {
      throw std::invalid_argument("taxonomy root lacks group '" + std::string(to_string(g)) + "'");
    }
  }
  auto paths = t.paths();
  std::sort(paths.begin(), paths.end());
  if (std::adjacent_find(paths.begin(), paths.end()) != paths.end()) {
    throw std::invalid_argument("taxonomy paths are not unique");
  }
  return t;
}

const TaxonomyNode* Taxonomy::lookup(std::string_view path) const {
  const TaxonomyNode* node = &root_;
  if (path.empty()) return node;
  std::size_t start = 0;
  while (node && start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    node = node->child(path.substr(start, end - start));
    start = end + 1;
  }
  return node;
}

std::vector<std::string> Taxonomy::paths() const {
  std::vector<std::string> out;
  collect_paths(root_, out);
  return out;
}

json Taxonomy::to_json() const { return node_to_json(root_); }

// ---------------------------------------------------------------------------
// Descriptors

std::span<const std::string_view> known_units() {
  static constexpr std::string_view kUnits[] = {
      "kWh", "kvarh", "V", "A", "°", "°C", "%", "kPa", "W/m²", "h", "m²", "year", "dimensionless"};
  return kUnits;
}

std::vector<Violation> validate_descriptor(const FeatureDescriptor& d, const Taxonomy& taxonomy) {
  std::vector<Violation> out;
  if (d.name.empty()) out.push_back({"bad_name", "descriptor name is empty"});

  const auto* node = taxonomy.lookup(d.taxonomy_path);
  if (d.taxonomy_path.empty() || !node) {
    out.push_back({"unknown_path", "taxonomy path '" + d.taxonomy_path + "' does not resolve"});
  } else {
    auto top = std::string_view(d.taxonomy_path).substr(0, d.taxonomy_path.find('/'));
    if (top != to_string(d.group)) {
      out.push_back({"group_path_mismatch", "group " + std::string(to_string(d.group)) +
                                                " but path is under '" + std::string(top) + "'"});
    }
  }

  auto units = known_units();
  if (std::find(units.begin(), units.end(), d.unit) == units.end()) {
    out.push_back({"bad_unit", "unit '" + d.unit + "' is not recognised"});
  }

  if (d.leakage_horizon_hours < 0) {
    out.push_back({"leakage", "leakage horizon must be >= 0"});
  } else if (d.leakage_horizon_hours == 0 && !d.deterministic &&
             d.provenance != Provenance::Metadata) {
    out.push_back({"leakage", "horizon 0 is reserved for deterministic calendar/astronomy features"});
  }

  if (d.dtype == DType::Categorical && d.categories.empty()) {
    out.push_back({"categories", "categorical descriptor has no categories"});
  }
  if (d.dtype != DType::Categorical && !d.categories.empty()) {
    out.push_back({"categories", "only categorical descriptors carry categories"});
  }
  return out;
}

std::vector<FeatureDescriptor> select_features(const std::vector<FeatureDescriptor>& all,
                                               GroupSet combo, bool include_submeter) {
  if (combo.empty()) throw std::invalid_argument("feature group combination is empty");
  std::vector<FeatureDescriptor> out;
  for (const auto& d : all) {
    if (!combo.contains(d.group)) continue;
    if (!include_submeter && d.submeter) continue;
    out.push_back(d);
  }
  if (out.empty()) {
    throw std::invalid_argument("no features left for groups {" + combo.to_string() + "}");
  }
  return out;
}

json to_json(const FeatureDescriptor& d) {
  json out{{"name", d.name},
           {"group", to_string(d.group)},
           {"path", d.taxonomy_path},
           {"dtype", to_string(d.dtype)},
           {"unit", d.unit},
           {"provenance", to_string(d.provenance)},
           {"leakage_horizon_hours", d.leakage_horizon_hours},
           {"submeter", d.submeter},
           {"deterministic", d.deterministic},
           {"recipe", d.recipe}};
  if (!d.categories.empty()) out["categories"] = d.categories;
  return out;
}

FeatureDescriptor descriptor_from_json(const json& doc) {
  FeatureDescriptor d;
  d.name = doc.at("name").get<std::string>();
  auto group = parse_group(doc.at("group").get<std::string>());
  if (!group) throw std::invalid_argument("descriptor '" + d.name + "': unknown group");
  d.group = *group;
  d.taxonomy_path = doc.at("path").get<std::string>();
  d.dtype = parse_dtype(doc.at("dtype").get<std::string>());
  d.unit = doc.at("unit").get<std::string>();
  d.provenance = parse_provenance(doc.at("provenance").get<std::string>());
  d.leakage_horizon_hours = doc.at("leakage_horizon_hours").get<int>();
  d.submeter = doc.value("submeter", false);
  d.deterministic = doc.value("deterministic", false);
  d.recipe = doc.value("recipe", std::string{});
  if (doc.contains("categories")) d.categories = doc.at("categories").get<std::vector<std::string>>();
  return d;
}

json to_json(const std::vector<FeatureDescriptor>& descriptors) {
  json arr = json::array();
  for (const auto& d : descriptors) arr.push_back(to_json(d));
  return arr;
}

std::vector<FeatureDescriptor> descriptors_from_json(const json& doc) {
  const json& arr = doc.is_object() ? doc.at("descriptors") : doc;
  std::vector<FeatureDescriptor> out;
  out.reserve(arr.size());
  for (const auto& d : arr) out.push_back(descriptor_from_json(d));
  return out;
}

// ---------------------------------------------------------------------------
// Datasets

std::string_view to_string(DatasetId id) {
  switch (id) {
    case DatasetId::Hue: return "hue";
    case DatasetId::Uci: return "uci";
    case DatasetId::Refit: return "refit";
    case DatasetId::Synthetic: return "synthetic";
  }
  return "?";
}

DatasetId parse_dataset_id(std::string_view text) {
  for (auto id : {DatasetId::Hue, DatasetId::Uci, DatasetId::Refit, DatasetId::Synthetic}) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown dataset id '" + std::string(text) + "'");
}

DatasetDescriptor DatasetDescriptor::defaults(DatasetId id) {
  DatasetDescriptor d;
  d.id = id;
  switch (id) {
    case DatasetId::Hue:
      d.native_interval_seconds = 3600;
      d.timezone = "America/Vancouver";
      d.latitude = 49.25;
      d.longitude = -123.10;
      d.country = "CA";
      d.region = "ca-bc";
      d.has_submeters = false;
      break;
    case DatasetId::Uci:
      d.native_interval_seconds = 60;
      d.timezone = "Europe/Paris";
      d.latitude = 48.78;
      d.longitude = 2.29;
      d.country = "FR";
      d.region = "fr";
      d.has_submeters = true;
      d.household_ids = {"uci"};
      break;
    case DatasetId::Refit:
      d.native_interval_seconds = 8;
      d.timezone = "Europe/London";
      d.latitude = 52.77;
      d.longitude = -1.20;
      d.country = "GB";
      d.region = "gb-eng";
      d.has_submeters = true;
      break;
    case DatasetId::Synthetic:
      d.native_interval_seconds = 3600;
      d.timezone = "UTC";
      d.latitude = 51.50;
      d.longitude = -0.12;
      d.country = "GB";
      d.region = "gb-eng";
      d.has_submeters = true;
      d.household_ids = {"synth"};
      break;
  }
  return d;
}

void DatasetDescriptor::validate() const {
  int expected = 0;
  switch (id) {
    case DatasetId::Hue: expected = 3600; break;
    case DatasetId::Uci: expected = 60; break;
    case DatasetId::Refit: expected = 8; break;
    case DatasetId::Synthetic:
      if (native_interval_seconds <= 0) throw std::invalid_argument("synthetic interval must be > 0");
      return;
  }
  if (native_interval_seconds != expected) {
    throw std::invalid_argument(std::string(to_string(id)) + " native interval must be " +
                                std::to_string(expected) + " s");
  }
  if (latitude < -90.0 || latitude > 90.0) throw std::invalid_argument("latitude out of range");
}

json to_json(const DatasetDescriptor& d) {
  return json{{"id", to_string(d.id)},
              {"household_ids", d.household_ids},
              {"native_interval_seconds", d.native_interval_seconds},
              {"timezone", d.timezone},
              {"latitude", d.latitude},
              {"longitude", d.longitude},
              {"country", d.country},
              {"region", d.region},
              {"has_submeters", d.has_submeters}};
}

}  // namespace gridfeat
