#include "sfreject/report.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "sfreject/error.hpp"

namespace sfreject {

using nlohmann::ordered_json;

namespace {

ordered_json optional_value(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json summary_json(const MetricSummary& s) {
  return ordered_json{{"n_folds", s.n},
                      {"mean", s.mean},
                      {"variance", s.variance},
                      {"std", s.std_dev}};
}

ordered_json config_json(const ExperimentConfig& c) {
  const auto& w = c.semifactual.weights;
  const auto& o = c.semifactual.optimizer;
  return ordered_json{
      {"model", to_string(c.classifier.kind)},
      {"k_neighbors", c.classifier.k_neighbors},
      {"theta", c.theta ? ordered_json(*c.theta) : ordered_json("knee")},
      {"knee_source", to_string(c.knee_source)},
      {"n_folds", c.n_folds},
      {"calib_fraction", c.calib_fraction},
      {"k", c.k},
      {"seed", c.seed},
      {"perturbation", {{"fraction", c.perturb_fraction}, {"noise_std", c.noise_std}}},
      {"loss",
       {{"c_feasibility", w.c_feasibility},
        {"c_sf", w.c_sf},
        {"c_simple", w.c_simple},
        {"c_similarity", w.c_similarity},
        {"c_diverse", w.c_diverse},
        {"mu", w.mu},
        {"change_epsilon", c.semifactual.change_epsilon}}},
      {"search",
       {{"support_search", to_string(c.semifactual.support_search)},
        {"box_margin", c.box_margin},
        {"box_radius", c.box_radius}}},
      {"optimizer",
       {{"reflection", o.reflection},
        {"expansion", o.expansion},
        {"contraction", o.contraction},
        {"shrink", o.shrink},
        {"max_iter", o.max_iter},
        {"x_tol", o.x_tol},
        {"f_tol", o.f_tol},
        {"initial_step", o.initial_step},
        {"n_restarts", o.n_restarts}}},
  };
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string cell(const MetricSummary& s) {
  if (s.n == 0) return "n/a";
  return fixed2(s.mean) + " ± " + fixed2(s.variance);
}

}  // namespace

std::string report_to_json(const ExperimentReport& report, const ExperimentConfig& config) {
  ordered_json folds = ordered_json::array();
  std::size_t n_explained = 0;
  for (const auto& f : report.folds) {
    n_explained += f.n_flips;
    folds.push_back(ordered_json{
        {"fold", f.fold},
        {"theta", f.theta},
        {"knee_degenerate", f.knee_degenerate},
        {"n_train", f.n_train},
        {"n_calib", f.n_calib},
        {"n_test", f.n_test},
        {"n_rejected_test", f.n_rejected_test},
        {"n_explained", f.n_flips},
        {"n_semifactuals", f.n_semifactuals},
        {"perturbed_features", f.perturbed_features},
        {"feasibility", optional_value(f.metrics.feasibility)},
        {"sparsity", optional_value(f.metrics.sparsity)},
        {"diversity", optional_value(f.metrics.diversity)},
        {"recall", optional_value(f.metrics.recall)},
        {"flag", f.flag.empty() ? ordered_json(nullptr) : ordered_json(f.flag)},
    });
  }
  const ordered_json doc{
      {"dataset", report.dataset_name},
      {"model", report.model_name},
      {"n_samples", report.n_samples},
      {"n_features", report.n_features},
      {"n_classes", report.n_classes},
      {"n_explained", n_explained},
      {"config", config_json(config)},
      {"folds", folds},
      {"aggregate",
       {{"feasibility", summary_json(report.feasibility)},
        {"sparsity", summary_json(report.sparsity)},
        {"diversity", summary_json(report.diversity)},
        {"recall", summary_json(report.recall)}}},
  };
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::size_t n_explained = 0;
  for (const auto& f : report.folds) n_explained += f.n_flips;
  std::ostringstream out;
  out << "model,dataset,n_explained,Feas.,Spars.,Div.,Recall,"
         "Feas. std,Spars. std,Div. std,Recall std\n";
  out << report.model_name << ',' << report.dataset_name << ',' << n_explained << ','
      << cell(report.feasibility) << ',' << cell(report.sparsity) << ','
      << cell(report.diversity) << ',' << cell(report.recall) << ','
      << fixed4(report.feasibility.std_dev) << ',' << fixed4(report.sparsity.std_dev) << ','
      << fixed4(report.diversity.std_dev) << ',' << fixed4(report.recall.std_dev) << '\n';
  return out.str();
}

std::string report_table_row(const ExperimentReport& report) {
  std::ostringstream out;
  out << report.model_name << " | " << report.dataset_name << " | Feas. "
      << cell(report.feasibility) << " | Spars. " << cell(report.sparsity) << " | Div. "
      << cell(report.diversity) << " | Recall " << cell(report.recall)
      << "   (mean ± variance over folds)";
  return out.str();
}

std::string explanation_to_json_line(const ExplainedSample& sample,
                                     const std::vector<std::string>& feature_names,
                                     bool verbose) {
  const auto& set = sample.explanation;
  ordered_json sfs = ordered_json::array();
  for (std::size_t i = 0; i < set.semifactuals.size(); ++i) {
    const auto& sf = set.semifactuals[i];
    std::vector<std::string> names;
    ordered_json changes = ordered_json::object();
    for (std::size_t j : sf.changed_features) {
      names.push_back(feature_names.at(j));
      changes[feature_names.at(j)] = sample.deltas_original.at(i).at(j);
    }
    ordered_json entry{
        {"changed_features", names},
        {"delta", changes},
        {"credibility", sf.credibility_sf},
        {"feasible", sf.feasible},
        {"loss", sf.loss},
    };
    if (!sf.diagnostic.empty()) entry["diagnostic"] = sf.diagnostic;
    if (verbose) {
      entry["delta_all"] = sample.deltas_original.at(i);
      entry["x_sf_standardized"] = sf.x_sf;
      entry["delta_standardized"] = sf.delta;
      entry["n_evals"] = sf.n_evals;
    }
    sfs.push_back(std::move(entry));
  }
  ordered_json features = ordered_json::object();
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    features[feature_names[j]] = sample.x_original.at(j);
  }
  ordered_json doc{
      {"fold", sample.fold},
      {"row", sample.row},
      {"features", features},
      {"credibility", set.credibility_x},
      {"theta", set.theta},
      {"k", set.k},
      {"truncated", set.truncated},
      {"semifactuals", sfs},
  };
  if (verbose) {
    ordered_json trace = ordered_json::array();
    for (const auto& b : set.blacklist_trace) trace.push_back(b.features());
    doc["blacklist_trace"] = trace;
    doc["x_standardized"] = set.original_x;
  }
  return doc.dump();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace sfreject
