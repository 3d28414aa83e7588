#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridfeat/config.hpp"
#include "gridfeat/csv.hpp"
#include "gridfeat/eval.hpp"
#include "gridfeat/explain.hpp"
#include "gridfeat/inventory.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace gridfeat;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string dataset;
  std::string data_root;
  std::string output_dir;
  std::string frames_dir;
  std::vector<std::string> synthetic;
  std::vector<std::string> households;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--dataset", f.dataset, "hue, uci, refit or synthetic");
  cmd->add_option("--data-root", f.data_root, "dataset root (default: $GRIDFEAT_DATA)");
  cmd->add_option("--output", f.output_dir, "output directory");
  cmd->add_option("--frames", f.frames_dir, "read household frames from an ingest cache instead of raw files");
  cmd->add_option("--synthetic", f.synthetic, "synthetic generator override key=value (implies --dataset synthetic)")
      ->expected(1, 32);
  cmd->add_option("--households", f.households, "household ids to load");
  cmd->add_option("--jobs", f.jobs, "parallel workers (default: available cores)");
  cmd->add_option("--seed", f.seed, "seed for every random draw");
}

json parse_scalar(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

// Flags are applied to the JSON document so the usual key checks and
// validation run on the merged result.
RunConfig resolve(const CommonFlags& f) {
  json doc = json::object();
  if (!f.config_path.empty()) {
    try {
      doc = json::parse(csv::read_file(f.config_path));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config " + f.config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config " + f.config_path + ": top level must be an object");
  }
  if (!f.dataset.empty()) doc["dataset"] = f.dataset;
  if (!f.data_root.empty()) doc["data_root"] = f.data_root;
  if (!f.output_dir.empty()) doc["output_dir"] = f.output_dir;
  if (!f.households.empty()) doc["households"] = f.households;
  if (f.jobs) doc["jobs"] = *f.jobs;
  if (f.seed) doc["seed"] = *f.seed;
  if (!f.synthetic.empty()) {
    doc["dataset"] = "synthetic";
    for (const auto& kv : f.synthetic) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--synthetic expects key=value, got '" + kv + "'");
      const auto key = kv.substr(0, eq);
      const auto value = parse_scalar(kv.substr(eq + 1));
      if (key == "seed") {
        doc["seed"] = value;
      } else {
        doc["synthetic"][key] = value;
      }
    }
  }
  auto config = config_from_json(doc);
  if (config.data_root.empty()) {
    if (const char* env = std::getenv("GRIDFEAT_DATA")) config.data_root = env;
  }
  return config;
}

void echo_config(const RunConfig& config) {
  fs::create_directories(config.output_dir);
  csv::write_file((fs::path(config.output_dir) / "config.resolved.json").string(), to_json(config).dump(2) + "\n");
}

std::vector<HourlyFrame> load_frames(const RunConfig& config, const std::string& frames_dir) {
  if (!frames_dir.empty()) {
    auto ids = config.households.empty() ? cached_households(frames_dir) : config.households;
    if (ids.empty()) throw std::runtime_error("no cached households in " + frames_dir);
    std::vector<HourlyFrame> frames;
    for (const auto& id : ids) frames.push_back(load_frame(frames_dir, id));
    return frames;
  }
  if (config.dataset == DatasetId::Synthetic) return {synth_household(config.synthetic).frame};
  if (config.data_root.empty()) {
    throw std::invalid_argument("no dataset root: pass --data-root, set data_root in the config or set GRIDFEAT_DATA");
  }
  if (!fs::exists(config.data_root)) throw std::runtime_error("dataset root does not exist: " + config.data_root);
  LoadReport report;
  auto frames = load_dataset(config.dataset_descriptor(), config.data_root, config.ingest, &report);
  if (report.malformed > 0) {
    std::cerr << "skipped " << report.malformed << " malformed rows of " << report.rows << "\n";
  }
  return frames;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  return (fs::path(config.output_dir) / name).string();
}

std::string prefix(const RunConfig& config) { return std::string(to_string(config.dataset)); }

// Training and test matrices restricted to a group combination.
struct Prepared {
  std::vector<FeatureDescriptor> descriptors;
  std::vector<FeatureDescriptor> selected;
  TrainTest split;
};

Prepared prepare(const RunConfig& config, const std::vector<HourlyFrame>& frames, const std::string& groups) {
  Prepared p;
  p.descriptors = dataset_inventory(config.dataset, frames);
  const auto combo = groups.empty() ? GroupSet::all() : GroupSet::parse(groups);
  p.selected = select_features(p.descriptors, combo, true);
  const auto full = build_dataset_matrix(frames, p.descriptors, config.features, config.effective_jobs());
  auto split = split_train_test(full, config.split);
  p.split.train = split.train.select(p.selected);
  p.split.test = split.test.select(p.selected);
  return p;
}

int cmd_ingest(const CommonFlags& f) {
  const auto config = resolve(f);
  echo_config(config);
  const auto frames = load_frames(config, f.frames_dir);
  const auto dir = out_path(config, "frames");
  fs::create_directories(dir);
  std::size_t hours = 0, observed = 0;
  for (const auto& frame : frames) {
    save_frame(frame, dir);
    hours += frame.size();
    observed += frame.observed_hours();
  }
  std::cout << "ingested " << frames.size() << " households, " << hours << " hours (" << observed
            << " observed) into " << dir << "\n";
  return 0;
}

int cmd_featurize(const CommonFlags& f) {
  const auto config = resolve(f);
  echo_config(config);
  const auto frames = load_frames(config, f.frames_dir);
  const auto descriptors = dataset_inventory(config.dataset, frames);
  const auto matrix = build_dataset_matrix(frames, descriptors, config.features, config.effective_jobs());
  const auto base = prefix(config) + "_features";
  export_matrix(matrix, out_path(config, base + ".csv"), out_path(config, base + ".json"));
  csv::write_file(out_path(config, prefix(config) + "_descriptors.json"), to_json(descriptors).dump(2) + "\n");
  std::cout << "wrote " << matrix.rows() << " rows x " << matrix.cols() << " columns to "
            << out_path(config, base + ".csv") << "\n";
  return 0;
}

int cmd_train(const CommonFlags& f, const std::string& model_name, const std::string& groups) {
  const auto config = resolve(f);
  echo_config(config);
  const auto kind = parse_model_kind(model_name);
  const auto frames = load_frames(config, f.frames_dir);
  const auto p = prepare(config, frames, groups);
  ModelParams params{config.gbt, config.mlp};
  const auto model = fit(kind, p.split.train, params);
  const auto forecast = predict(model, p.split.test);
  const auto m = evaluate(p.split.test.target, forecast, config.epsilon);
  const auto path = out_path(config, prefix(config) + "_" + std::string(to_string(kind)) + "_model.json");
  csv::write_file(path, to_json(model).dump() + "\n");
  std::cout << to_string(kind) << ": mpe " << csv::format_double(m.mpe) << " %, mse " << csv::format_double(m.mse)
            << " kWh^2 over " << m.n_samples << " test rows; model written to " << path << "\n";
  return 0;
}

int cmd_ablate(const CommonFlags& f, const std::vector<std::string>& models, const std::string& groups) {
  auto config = resolve(f);
  if (!models.empty()) {
    config.models.clear();
    for (const auto& m : models) config.models.push_back(parse_model_kind(m));
  }
  echo_config(config);
  const auto frames = load_frames(config, f.frames_dir);
  const auto descriptors = dataset_inventory(config.dataset, frames);
  auto ablation = config.ablation_config();
  if (!groups.empty()) ablation.only_groups = GroupSet::parse(groups);
  const auto table = run_ablation(config.dataset, frames, descriptors, ablation);

  const auto stem = prefix(config) + "_ablation";
  csv::write_file(out_path(config, stem + ".md"), render_report(table, ReportFormat::Markdown));
  csv::write_file(out_path(config, stem + ".csv"), render_report(table, ReportFormat::Csv));
  csv::write_file(out_path(config, prefix(config) + "_groups.json"), groups_json(table, descriptors).dump(2) + "\n");
  std::cout << render_report(table, ReportFormat::Markdown);

  int failed = 0;
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.metrics.size(); ++k) {
      if (!row.metrics[k].failed) continue;
      ++failed;
      std::cerr << "failed cell: " << row.spec.label << " / " << to_string(table.models[k]) << ": "
                << row.metrics[k].error << "\n";
    }
  }
  if (failed > 0) {
    std::cerr << failed << " cell(s) failed\n";
    return 1;
  }
  return 0;
}

int cmd_explain(const CommonFlags& f, const std::string& model_name, const std::string& groups) {
  const auto config = resolve(f);
  const auto kind = parse_model_kind(model_name);
  if (kind != ModelKind::Gbt) {
    throw std::invalid_argument("explain supports gbt models only (tree SHAP); got '" + std::string(to_string(kind)) +
                                "'");
  }
  echo_config(config);
  const auto frames = load_frames(config, f.frames_dir);
  const auto p = prepare(config, frames, groups);
  const auto model = fit_gbt(p.split.train, config.gbt);
  const auto samples = subsample_rows(p.split.test, config.explain_max_rows);
  const auto background = subsample_rows(p.split.train, config.explain_background);
  ShapOptions opt;
  opt.jobs = config.effective_jobs();
  const auto e = tree_shap(model, samples, background, opt);
  const auto contribution = group_contributions(e, samples.columns, samples.parents);

  auto doc = group_summary_json(contribution);
  doc["dataset"] = prefix(config);
  doc["model"] = "gbt";
  doc["groups"] = (groups.empty() ? GroupSet::all() : GroupSet::parse(groups)).to_string();
  doc["explained_rows"] = e.rows;
  doc["background_rows"] = background.rows();
  doc["base_value"] = e.base_value;
  doc["local_accuracy_error"] = e.local_accuracy_error();
  const auto stem = prefix(config) + "_shap";
  csv::write_file(out_path(config, stem + "_groups.json"), doc.dump(2) + "\n");
  csv::write_file(out_path(config, stem + "_features.csv"), explanation_csv(e, samples));
  for (auto g : kAllGroups) {
    std::cout << to_string(g) << ": " << csv::format_double(contribution.share(g)) << " %\n";
  }
  return 0;
}

int cmd_report(const std::string& input, const std::string& format, const std::string& output) {
  const auto table = parse_report_csv(csv::read_file(input));
  std::string text;
  if (format == "md" || format == "markdown") {
    text = render_report(table, ReportFormat::Markdown);
  } else if (format == "csv") {
    text = render_report(table, ReportFormat::Csv);
  } else {
    throw std::invalid_argument("unknown report format '" + format + "' (md or csv)");
  }
  if (output.empty()) {
    std::cout << text;
  } else {
    csv::write_file(output, text);
  }
  return 0;
}

int print_violations(const std::string& what, const std::vector<FeatureDescriptor>& descriptors,
                     const Taxonomy& taxonomy) {
  int bad = 0;
  for (const auto& d : descriptors) {
    for (const auto& v : validate_descriptor(d, taxonomy)) {
      std::cerr << what << ": " << d.name << ": " << v.rule << ": " << v.message << "\n";
      ++bad;
    }
  }
  return bad;
}

int cmd_validate_schema(const std::string& taxonomy_path, const std::vector<std::string>& descriptor_files,
                        const std::string& dump) {
  const Taxonomy taxonomy =
      taxonomy_path.empty() ? Taxonomy::embedded() : Taxonomy::from_json(json::parse(csv::read_file(taxonomy_path)));
  if (!dump.empty()) {
    json doc;
    if (dump == "taxonomy") {
      doc = taxonomy.to_json();
    } else {
      std::vector<FeatureDescriptor> all;
      if (dump == "unavailable") {
        all = unavailable_descriptors();
      } else {
        const auto id = parse_dataset_id(dump);
        std::vector<HourlyFrame> frames;
        if (id == DatasetId::Synthetic) frames.push_back(synth_household(SynthSpec{}).frame);
        all = dataset_inventory(id, frames);
      }
      doc = to_json(all);
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  int bad = 0;
  if (descriptor_files.empty()) {
    for (auto id : {DatasetId::Hue, DatasetId::Uci, DatasetId::Refit, DatasetId::Synthetic}) {
      std::vector<HourlyFrame> frames;
      if (id == DatasetId::Synthetic) frames.push_back(synth_household(SynthSpec{}).frame);
      const auto all = dataset_inventory(id, frames);
      const int n = print_violations(std::string(to_string(id)), all, taxonomy);
      std::cout << to_string(id) << ": " << all.size() << " descriptors, " << n << " violations\n";
      bad += n;
    }
  }
  for (const auto& file : descriptor_files) {
    const auto all = descriptors_from_json(json::parse(csv::read_file(file)));
    const int n = print_violations(file, all, taxonomy);
    std::cout << file << ": " << all.size() << " descriptors, " << n << " violations\n";
    bad += n;
  }
  std::cout << "taxonomy: " << taxonomy.paths().size() << " nodes\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridfeat: taxonomy-driven household load forecasting benchmark"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string model_name = "gbt", groups;
  std::vector<std::string> models;

  auto* ingest = app.add_subcommand("ingest", "load a dataset and cache hourly household frames");
  add_common(ingest, common);

  auto* featurize = app.add_subcommand("featurize", "build and export the feature matrix");
  add_common(featurize, common);

  auto* train = app.add_subcommand("train", "fit one model on the training split and score the test split");
  add_common(train, common);
  train->add_option("--model", model_name, "linear, gbt, mlp or seasonal_naive");
  train->add_option("--groups", groups, "comma-separated groups, e.g. domain,contextual");

  auto* ablate = app.add_subcommand("ablate", "run the feature-group ablation grid and write reports");
  add_common(ablate, common);
  ablate->add_option("--model", models, "restrict to these models");
  ablate->add_option("--groups", groups, "run a single grid row with these groups");

  auto* explain = app.add_subcommand("explain", "SHAP group contributions of a gbt model");
  add_common(explain, common);
  explain->add_option("--model", model_name, "model kind (gbt only)");
  explain->add_option("--groups", groups, "comma-separated groups (default: all)");

  std::string report_input, report_format = "md", report_output;
  auto* report = app.add_subcommand("report", "re-render an ablation CSV");
  report->add_option("input", report_input, "ablation CSV")->required()->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "md or csv");
  report->add_option("--output", report_output, "write here instead of stdout");

  std::string taxonomy_path, dump;
  std::vector<std::string> descriptor_files;
  auto* validate = app.add_subcommand("validate-schema", "check the taxonomy and descriptor sets");
  validate->add_option("--taxonomy", taxonomy_path, "taxonomy JSON (default: embedded)")->check(CLI::ExistingFile);
  validate->add_option("descriptors", descriptor_files, "descriptor JSON files")->check(CLI::ExistingFile);
  validate->add_option("--dump", dump, "print 'taxonomy', 'unavailable' or a dataset's descriptors as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(common);
    if (*featurize) return cmd_featurize(common);
    if (*train) return cmd_train(common, model_name, groups);
    if (*ablate) return cmd_ablate(common, models, groups);
    if (*explain) return cmd_explain(common, model_name, groups);
    if (*report) return cmd_report(report_input, report_format, report_output);
    if (*validate) return cmd_validate_schema(taxonomy_path, descriptor_files, dump);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
