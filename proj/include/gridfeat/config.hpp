#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridfeat/eval.hpp"
#include "gridfeat/featurize.hpp"
#include "gridfeat/ingest.hpp"
#include "gridfeat/models.hpp"
#include "json.hpp"

namespace gridfeat {

/// Everything a CLI run needs. Unknown JSON keys are rejected at every level;
/// absent keys keep the defaults below.
struct RunConfig {
  DatasetId dataset = DatasetId::Synthetic;
  std::string data_root;  // empty: $GRIDFEAT_DATA
  std::string output_dir = "gridfeat-out";
  std::vector<std::string> households;  // empty: all
  std::uint64_t seed = 7;               // synthetic generator and mlp initialisation
  std::size_t jobs = 0;                 // 0: available cores

  SynthSpec synthetic;
  LoadOptions ingest;
  FeatureOptions features;
  std::vector<ModelKind> models = {ModelKind::Linear, ModelKind::Gbt, ModelKind::Mlp, ModelKind::SeasonalNaive};
  GbtParams gbt;
  MlpParams mlp;
  SplitSpec split;
  double epsilon = kDefaultEpsilon;
  bool explain = true;
  std::size_t explain_max_rows = 2000;
  std::size_t explain_background = 100;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
  std::size_t effective_jobs() const;
  DatasetDescriptor dataset_descriptor() const;
  AblationConfig ablation_config() const;
};

/// Throws std::invalid_argument naming the offending key.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
/// Fully resolved configuration, every default spelled out.
nlohmann::json to_json(const RunConfig& config);

}  // namespace gridfeat
