#include "gridfeat/config.hpp"

#include <set>
#include <stdexcept>

#include "gridfeat/csv.hpp"
#include "gridfeat/parallel.hpp"

namespace gridfeat {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) {
      throw std::invalid_argument("config: unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: key '" + (where.empty() ? std::string(key) : where + "." + key) +
                                "' has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  synthetic.validate();
  features.validate();
  gbt.validate();
  mlp.validate();
  split.validate();
  if (!(epsilon > 0)) throw std::invalid_argument("config: epsilon must be > 0");
  if (models.empty()) throw std::invalid_argument("config: at least one model is required");
  if (!(ingest.malformed_tolerance >= 0 && ingest.malformed_tolerance <= 1)) {
    throw std::invalid_argument("config: ingest.malformed_tolerance must lie in [0, 1]");
  }
  if (ingest.gap_limit_seconds < 1) throw std::invalid_argument("config: ingest.gap_limit_seconds must be >= 1");
}

std::size_t RunConfig::effective_jobs() const { return jobs == 0 ? default_jobs() : jobs; }

DatasetDescriptor RunConfig::dataset_descriptor() const {
  auto d = DatasetDescriptor::defaults(dataset);
  d.household_ids = households;
  return d;
}

AblationConfig RunConfig::ablation_config() const {
  AblationConfig a;
  a.models = models;
  a.params.gbt = gbt;
  a.params.mlp = mlp;
  a.params.mlp.seed = seed;
  a.split = split;
  a.features = features;
  a.epsilon = epsilon;
  a.jobs = effective_jobs();
  a.has_submeters = dataset_descriptor().has_submeters;
  a.explain = explain;
  a.explain_max_rows = explain_max_rows;
  a.explain_background = explain_background;
  return a;
}

RunConfig config_from_json(const json& doc) {
  only_keys(doc, "", {"dataset", "data_root", "output_dir", "households", "seed", "jobs", "synthetic", "ingest",
                      "features", "models", "gbt", "mlp", "split", "epsilon", "explain"});
  RunConfig c;
  if (doc.contains("dataset")) {
    std::string id;
    read(doc, "dataset", id, "");
    c.dataset = parse_dataset_id(id);
  }
  read(doc, "data_root", c.data_root, "");
  read(doc, "output_dir", c.output_dir, "");
  read(doc, "households", c.households, "");
  read(doc, "seed", c.seed, "");
  read(doc, "jobs", c.jobs, "");
  read(doc, "epsilon", c.epsilon, "");

  if (doc.contains("synthetic")) {
    const auto& s = doc.at("synthetic");
    only_keys(s, "synthetic", {"days", "start_day", "base_load_kwh", "daily_profile", "weekly_weekend_factor",
                               "meal_spike_kwh", "noise_std_kwh", "level_persistence", "level_std"});
    read(s, "days", c.synthetic.days, "synthetic");
    read(s, "start_day", c.synthetic.start_day, "synthetic");
    read(s, "base_load_kwh", c.synthetic.base_load_kwh, "synthetic");
    if (s.contains("daily_profile")) {
      std::vector<double> profile;
      read(s, "daily_profile", profile, "synthetic");
      if (profile.size() != 24) throw std::invalid_argument("config: synthetic.daily_profile needs 24 weights");
      std::copy(profile.begin(), profile.end(), c.synthetic.daily_profile.begin());
    }
    read(s, "weekly_weekend_factor", c.synthetic.weekly_weekend_factor, "synthetic");
    read(s, "meal_spike_kwh", c.synthetic.meal_spike_kwh, "synthetic");
    read(s, "noise_std_kwh", c.synthetic.noise_std_kwh, "synthetic");
    read(s, "level_persistence", c.synthetic.level_persistence, "synthetic");
    read(s, "level_std", c.synthetic.level_std, "synthetic");
  }
  if (doc.contains("ingest")) {
    const auto& s = doc.at("ingest");
    only_keys(s, "ingest", {"gap_limit_seconds", "malformed_tolerance"});
    read(s, "gap_limit_seconds", c.ingest.gap_limit_seconds, "ingest");
    read(s, "malformed_tolerance", c.ingest.malformed_tolerance, "ingest");
  }
  if (doc.contains("features")) {
    const auto& s = doc.at("features");
    only_keys(s, "features", {"rolling_window", "activity_threshold_kwh", "warmup_hours", "holiday_region", "schedule"});
    read(s, "rolling_window", c.features.rolling_window, "features");
    read(s, "activity_threshold_kwh", c.features.activity_threshold_kwh, "features");
    read(s, "warmup_hours", c.features.warmup_hours, "features");
    read(s, "holiday_region", c.features.holiday_region, "features");
    if (s.contains("schedule")) {
      const auto& w = s.at("schedule");
      only_keys(w, "features.schedule", {"breakfast", "lunch", "dinner", "work", "free_time", "sleep"});
      for (const auto& [name, range] : w.items()) {
        if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() || !range[1].is_number_integer()) {
          throw std::invalid_argument("config: features.schedule." + name + " must be [start, end]");
        }
        c.features.schedule.windows[name] = {range[0].get<int>(), range[1].get<int>()};
      }
    }
  }
  if (doc.contains("models")) {
    std::vector<std::string> names;
    read(doc, "models", names, "");
    c.models.clear();
    for (const auto& n : names) c.models.push_back(parse_model_kind(n));
  }
  if (doc.contains("gbt")) {
    const auto& s = doc.at("gbt");
    only_keys(s, "gbt", {"n_rounds", "learning_rate", "max_depth", "min_child_weight", "lambda_l2"});
    read(s, "n_rounds", c.gbt.n_rounds, "gbt");
    read(s, "learning_rate", c.gbt.learning_rate, "gbt");
    read(s, "max_depth", c.gbt.max_depth, "gbt");
    read(s, "min_child_weight", c.gbt.min_child_weight, "gbt");
    read(s, "lambda_l2", c.gbt.lambda_l2, "gbt");
  }
  if (doc.contains("mlp")) {
    const auto& s = doc.at("mlp");
    only_keys(s, "mlp", {"hidden_layers", "max_iterations", "learning_rate_init", "batch_size", "plateau_epochs", "tol",
                         "min_learning_rate", "alpha_l2"});
    read(s, "hidden_layers", c.mlp.hidden_layers, "mlp");
    read(s, "max_iterations", c.mlp.max_iterations, "mlp");
    read(s, "learning_rate_init", c.mlp.learning_rate_init, "mlp");
    read(s, "batch_size", c.mlp.batch_size, "mlp");
    read(s, "plateau_epochs", c.mlp.plateau_epochs, "mlp");
    read(s, "tol", c.mlp.tol, "mlp");
    read(s, "min_learning_rate", c.mlp.min_learning_rate, "mlp");
    read(s, "alpha_l2", c.mlp.alpha_l2, "mlp");
  }
  if (doc.contains("split")) {
    const auto& s = doc.at("split");
    only_keys(s, "split", {"train_fraction"});
    read(s, "train_fraction", c.split.train_fraction, "split");
  }
  if (doc.contains("explain")) {
    const auto& s = doc.at("explain");
    only_keys(s, "explain", {"enabled", "max_rows", "background_rows"});
    read(s, "enabled", c.explain, "explain");
    read(s, "max_rows", c.explain_max_rows, "explain");
    read(s, "background_rows", c.explain_background, "explain");
  }
  c.synthetic.seed = c.seed;
  c.mlp.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  const auto text = csv::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const RunConfig& c) {
  json schedule = json::object();
  for (const auto& [name, w] : c.features.schedule.windows) schedule[name] = {w.start, w.end};
  std::vector<std::string> models;
  for (auto m : c.models) models.emplace_back(to_string(m));
  return {
      {"dataset", std::string(to_string(c.dataset))},
      {"data_root", c.data_root},
      {"output_dir", c.output_dir},
      {"households", c.households},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"synthetic",
       {{"days", c.synthetic.days},
        {"start_day", c.synthetic.start_day},
        {"base_load_kwh", c.synthetic.base_load_kwh},
        {"daily_profile", c.synthetic.daily_profile},
        {"weekly_weekend_factor", c.synthetic.weekly_weekend_factor},
        {"meal_spike_kwh", c.synthetic.meal_spike_kwh},
        {"noise_std_kwh", c.synthetic.noise_std_kwh},
        {"level_persistence", c.synthetic.level_persistence},
        {"level_std", c.synthetic.level_std}}},
      {"ingest", {{"gap_limit_seconds", c.ingest.gap_limit_seconds}, {"malformed_tolerance", c.ingest.malformed_tolerance}}},
      {"features",
       {{"rolling_window", c.features.rolling_window},
        {"activity_threshold_kwh", c.features.activity_threshold_kwh},
        {"warmup_hours", c.features.warmup_hours},
        {"holiday_region", c.features.holiday_region},
        {"schedule", schedule}}},
      {"models", models},
      {"gbt",
       {{"n_rounds", c.gbt.n_rounds},
        {"learning_rate", c.gbt.learning_rate},
        {"max_depth", c.gbt.max_depth},
        {"min_child_weight", c.gbt.min_child_weight},
        {"lambda_l2", c.gbt.lambda_l2}}},
      {"mlp",
       {{"hidden_layers", c.mlp.hidden_layers},
        {"max_iterations", c.mlp.max_iterations},
        {"learning_rate_init", c.mlp.learning_rate_init},
        {"batch_size", c.mlp.batch_size},
        {"plateau_epochs", c.mlp.plateau_epochs},
        {"tol", c.mlp.tol},
        {"min_learning_rate", c.mlp.min_learning_rate},
        {"alpha_l2", c.mlp.alpha_l2}}},
      {"split", {{"train_fraction", c.split.train_fraction}}},
      {"epsilon", c.epsilon},
      {"explain",
       {{"enabled", c.explain}, {"max_rows", c.explain_max_rows}, {"background_rows", c.explain_background}}},
  };
}

}  // namespace gridfeat
