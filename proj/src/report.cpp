#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "gridfeat/csv.hpp"
#include "gridfeat/eval.hpp"

namespace gridfeat {
namespace {

constexpr const char* kCsvHeader =
    "dataset,row,label,groups,include_submeter,raw_only,model,mpe,mse,n_samples,epsilon,status,error";

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::string groups_field(GroupSet g) {
  auto s = g.to_string();
  std::replace(s.begin(), s.end(), ',', '|');
  return s;
}

std::string markdown(const ReportTable& t) {
  std::string out = "# " + std::string(to_string(t.dataset)) + " feature-group ablation\n\n";
  out += "| # | Feature groups | Submeters | Raw only |";
  for (auto m : t.models) {
    const std::string name(to_string(m));
    out += " " + name + " MPE [%] | " + name + " MSE [kWh²] |";
  }
  out += "\n|---|---|---|---|";
  for (std::size_t k = 0; k < t.models.size(); ++k) out += "---:|---:|";
  out += "\n";

  std::vector<double> best(t.models.size(), std::numeric_limits<double>::infinity());
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.metrics.size(); ++k) {
      if (!row.metrics[k].failed) best[k] = std::min(best[k], row.metrics[k].mpe);
    }
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    out += "| " + std::to_string(r + 1) + " | " + row.spec.label + " | " + (row.spec.include_submeter ? "yes" : "no") +
           " | " + (row.spec.raw_only ? "yes" : "no") + " |";
    for (std::size_t k = 0; k < row.metrics.size(); ++k) {
      const auto& m = row.metrics[k];
      if (m.failed) {
        out += " failed | failed |";
        continue;
      }
      const auto mpe = fixed(m.mpe, 3);
      out += " " + (m.mpe == best[k] ? "**" + mpe + "**" : mpe) + " | " + fixed(m.mse, 5) + " |";
    }
    out += "\n";
  }
  if (!t.rows.empty()) {
    out += "\nBold marks the lowest MPE per model. MSE is in kWh². The raw-data row uses measured channels and "
           "metadata lagged by one hour, without engineered features. seasonal_naive repeats consumption_lag24 "
           "and ignores the row's feature selection.\n";
  }
  bool any_failed = false;
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.metrics.size(); ++k) {
      if (!row.metrics[k].failed) continue;
      if (!any_failed) out += "\nFailed cells:\n\n";
      any_failed = true;
      out += "- " + row.spec.label + " / " + std::string(to_string(t.models[k])) + ": " + row.metrics[k].error + "\n";
    }
  }
  if (t.groups) {
    const auto& g = t.groups->contribution;
    out += "\n## Group contributions (gbt, D+C+B, mean |SHAP| on " + std::to_string(t.groups->explained_rows) +
           " test rows)\n\n| Group | Features | Share [%] |\n|---|---:|---:|\n";
    for (auto group : kAllGroups) {
      const auto k = static_cast<int>(group);
      out += "| " + std::string(to_string(group)) + " | " + std::to_string(g.feature_counts[k]) + " | " +
             fixed(g.share_percent[k], 1) + " |\n";
    }
  }
  return out;
}

std::string csv_text(const ReportTable& t) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    for (std::size_t k = 0; k < row.metrics.size(); ++k) {
      const auto& m = row.metrics[k];
      out += std::string(to_string(t.dataset)) + "," + std::to_string(r + 1) + "," + sanitize(row.spec.label) + "," +
             groups_field(row.spec.combo) + "," + (row.spec.include_submeter ? "1" : "0") + "," +
             (row.spec.raw_only ? "1" : "0") + "," + std::string(to_string(t.models[k])) + ",";
      if (m.failed) {
        out += ",,0," + csv::format_double(m.epsilon) + ",failed," + sanitize(m.error) + "\n";
      } else {
        out += csv::format_double(m.mpe) + "," + csv::format_double(m.mse) + "," + std::to_string(m.n_samples) + "," +
               csv::format_double(m.epsilon) + ",ok,\n";
      }
    }
  }
  return out;
}

}  // namespace

std::string render_report(const ReportTable& table, ReportFormat format) {
  return format == ReportFormat::Markdown ? markdown(table) : csv_text(table);
}

ReportTable parse_report_csv(const std::string& text) {
  ReportTable t;
  bool header = true;
  std::map<std::string, std::size_t> model_index;
  std::size_t line_no = 0;
  csv::for_each_line(text, [&](std::string_view line) {
    ++line_no;
    if (line.empty()) return;
    if (header) {
      if (line != kCsvHeader) throw std::invalid_argument("not an ablation report CSV (unexpected header)");
      header = false;
      return;
    }
    auto f = csv::split(line);
    if (f.size() < 13) throw std::invalid_argument("report line " + std::to_string(line_no) + " has too few fields");
    t.dataset = parse_dataset_id(f[0]);
    const auto row = csv::parse_int(f[1]);
    if (!row || *row < 1) throw std::invalid_argument("report line " + std::to_string(line_no) + ": bad row number");
    const std::string model(f[6]);
    if (!model_index.count(model)) {
      model_index[model] = t.models.size();
      t.models.push_back(parse_model_kind(model));
    }
    const auto r = static_cast<std::size_t>(*row - 1);
    if (t.rows.size() <= r) t.rows.resize(r + 1);
    auto& ar = t.rows[r];
    std::string groups(f[3]);
    std::replace(groups.begin(), groups.end(), '|', ',');
    ar.spec = {std::string(f[2]), GroupSet::parse(groups), f[4] == "1", f[5] == "1"};
    const auto k = model_index[model];
    if (ar.metrics.size() <= k) ar.metrics.resize(k + 1);
    auto& m = ar.metrics[k];
    m.epsilon = csv::parse_double(f[10]).value_or(kDefaultEpsilon);
    if (f[11] == "failed") {
      m.failed = true;
      std::string err;
      for (std::size_t i = 12; i < f.size(); ++i) err += (i > 12 ? "," : "") + std::string(f[i]);
      m.error = err;
    } else {
      auto mpe = csv::parse_double(f[7]), mse = csv::parse_double(f[8]);
      auto n = csv::parse_int(f[9]);
      if (!mpe || !mse || !n) throw std::invalid_argument("report line " + std::to_string(line_no) + ": bad metric");
      m.mpe = *mpe;
      m.mse = *mse;
      m.n_samples = static_cast<std::size_t>(*n);
    }
  });
  if (header) throw std::invalid_argument("empty report CSV");
  return t;
}

nlohmann::json groups_json(const ReportTable& table, const std::vector<FeatureDescriptor>& descriptors) {
  nlohmann::json doc = nlohmann::json::object();
  doc["dataset"] = std::string(to_string(table.dataset));
  nlohmann::json counts = nlohmann::json::object();
  std::size_t total = 0;
  for (auto g : kAllGroups) {
    const auto n = static_cast<std::size_t>(
        std::count_if(descriptors.begin(), descriptors.end(), [&](const FeatureDescriptor& d) { return d.group == g; }));
    counts[std::string(to_string(g))] = n;
    total += n;
  }
  doc["feature_counts"] = counts;
  doc["total_features"] = total;
  if (table.groups) {
    const auto& c = table.groups->contribution;
    nlohmann::json shares = nlohmann::json::object();
    for (auto g : kAllGroups) shares[std::string(to_string(g))] = c.share_percent[static_cast<int>(g)];
    doc["share_percent"] = shares;
    doc["model"] = "gbt";
    doc["row"] = "D+C+B";
    doc["explained_rows"] = table.groups->explained_rows;
    doc["local_accuracy_error"] = table.groups->local_accuracy_error;
  } else {
    doc["share_percent"] = nullptr;
  }
  return doc;
}

}  // namespace gridfeat
