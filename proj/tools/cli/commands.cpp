#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "sfreject/error.hpp"
#include "sfreject/report.hpp"

namespace sfreject::cli {

namespace {

struct Overrides {
  std::string config_path;
  std::string dataset;
  std::string label;
  std::string model;
  std::string theta;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
  bool verbose = false;
};

struct ExplainOptions {
  std::optional<std::size_t> row;
  std::string vector;
  bool perturb = false;
};

RunConfig resolve(const Overrides& o) {
  RunConfig config;
  if (!o.config_path.empty()) load_config_file(o.config_path, config);
  if (!o.dataset.empty()) config.dataset = o.dataset;
  if (!o.label.empty()) config.label_column = o.label;
  if (!o.model.empty()) config.experiment.classifier.kind = parse_classifier_kind(o.model);
  if (!o.theta.empty()) config.experiment.theta = parse_theta(o.theta);
  if (o.k) config.experiment.k = *o.k;
  if (o.seed) config.experiment.seed = *o.seed;
  if (o.jobs) config.experiment.jobs = *o.jobs;
  if (!o.out.empty()) config.out_dir = o.out;
  if (o.verbose) config.verbose = true;
  if (config.dataset_name.empty()) config.dataset_name = config.dataset.stem().string();
  config.validate();
  return config;
}

Vector parse_vector(const std::string& text) {
  Vector v;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("--x: cannot parse '" + cell + "' as a number");
    }
  }
  return v;
}

int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Dataset data = load_csv(config.dataset, config.label_column, config.impute_missing);
  const auto started = std::chrono::steady_clock::now();
  const ExperimentReport report = run_experiment(data, config.experiment, config.dataset_name);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  const auto dir = config.out_dir.empty() ? std::filesystem::path("sfreject_out") : config.out_dir;
  write_text_file(dir / "report.json", report_to_json(report, config.experiment));
  write_text_file(dir / "report.csv", report_to_csv(report));
  std::string lines;
  for (const auto& s : report.samples) {
    lines += explanation_to_json_line(s, data.feature_names(), config.verbose) + "\n";
  }
  write_text_file(dir / "explanations.jsonl", lines);

  for (const auto& f : report.folds) {
    if (!f.flag.empty()) err << "fold " << f.fold << ": " << f.flag << "\n";
  }
  out << report_table_row(report) << "\n";
  err << "wrote " << (dir / "report.json").string() << ", report.csv, explanations.jsonl ("
      << elapsed.count() << " s)\n";
  return kOk;
}

int cmd_inspect(const RunConfig& config, std::ostream& out) {
  const Dataset data = load_csv(config.dataset, config.label_column, config.impute_missing);
  const auto folds = inspect_rejection(data, config.experiment);
  std::size_t total = 0;
  std::size_t rejected = 0;
  for (const auto& f : folds) {
    total += f.n_test;
    rejected += f.n_rejected;
    out << "fold " << f.fold << ": theta " << f.theta
        << (config.experiment.theta ? " (fixed)" : " (knee)")
        << (f.knee_degenerate ? " [degenerate knee, midpoint used]" : "") << ", rejected "
        << f.n_rejected << "/" << f.n_test << " (rate "
        << static_cast<double>(f.n_rejected) / static_cast<double>(f.n_test) << ")\n";
    for (std::size_t b = 0; b < f.histogram.size(); ++b) {
      char label[32];
      std::snprintf(label, sizeof label, "  [%.1f, %.1f%c ", 0.1 * static_cast<double>(b),
                    0.1 * static_cast<double>(b + 1), b + 1 == f.histogram.size() ? ']' : ')');
      out << label << std::string(f.histogram[b], '#') << " " << f.histogram[b] << "\n";
    }
  }
  out << "overall rejection rate " << static_cast<double>(rejected) / static_cast<double>(total)
      << "\n";
  return kOk;
}

int cmd_explain(const RunConfig& config, const ExplainOptions& opt, std::ostream& out,
                std::ostream& err) {
  const Dataset data = load_csv(config.dataset, config.label_column, config.impute_missing);
  if (opt.row.has_value() == !opt.vector.empty()) {
    throw ConfigError("explain needs exactly one of --row or --x");
  }
  const auto folds = experiment_folds(data, config.experiment);
  std::size_t fold = 0;
  if (opt.row) {
    if (*opt.row >= data.n_samples()) {
      throw ConfigError("--row " + std::to_string(*opt.row) + " out of range (dataset has " +
                        std::to_string(data.n_samples()) + " rows)");
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto& t = folds[f].test_indices;
      if (std::binary_search(t.begin(), t.end(), *opt.row)) fold = f;
    }
  }
  const FoldModel m = fit_fold(data, folds, fold, config.experiment);

  Vector x;
  if (opt.row) {
    const auto r = m.standardized.row(*opt.row);
    x.assign(r.begin(), r.end());
  } else {
    const Vector raw = parse_vector(opt.vector);
    if (raw.size() != data.n_features()) {
      throw ConfigError("--x has " + std::to_string(raw.size()) + " values, dataset has " +
                        std::to_string(data.n_features()) + " features");
    }
    x = m.standardizer.transform(raw);
  }
  if (opt.perturb) x = perturb(x, m.perturbation, opt.row.value_or(0));

  const auto decision = m.rejector->decide(x);
  if (!decision.rejected) {
    err << "input not rejected; nothing to explain (credibility " << decision.credibility
        << " >= theta " << m.rejector->theta() << ")\n";
    return kNotRejected;
  }

  SemifactualConfig sc = config.experiment.semifactual;
  sc.box = explanation_box(m, x, config.experiment);
  sc.optimizer.seed = mix_seed(config.experiment.seed, 7 + opt.row.value_or(0));

  ExplainedSample sample;
  sample.fold = fold;
  sample.row = opt.row.value_or(0);
  sample.x_original = m.standardizer.inverse_transform(x);
  sample.explanation = compute_diverse_semifactuals(x, config.experiment.k, *m.rejector, sc);
  for (const auto& sf : sample.explanation.semifactuals) {
    sample.deltas_original.push_back(m.standardizer.inverse_transform_delta(sf.delta));
  }
  const std::string line = explanation_to_json_line(sample, data.feature_names(), config.verbose);
  out << line << "\n";
  if (!config.out_dir.empty()) write_text_file(config.out_dir / "explanations.jsonl", line + "\n");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal reject option with diverse semifactual explanations", "sfreject"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  app.add_option("--config", o.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--dataset", o.dataset, "CSV dataset");
  app.add_option("--label", o.label, "Label column name");
  app.add_option("--model", o.model, "Classifier")->check(CLI::IsMember({"knn", "gnb"}));
  app.add_option("--theta", o.theta, "'knee' or a threshold in (0, 1]");
  auto* k_opt = app.add_option("--k", k, "Semifactuals per rejected input");
  auto* seed_opt = app.add_option("--seed", seed, "Master random seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  app.add_option("--out", o.out, "Output directory");
  app.add_flag("--verbose", o.verbose, "Also emit standardized values");

  auto* explain = app.add_subcommand("explain", "Explain one rejected input");
  ExplainOptions ex;
  std::size_t row = 0;
  auto* row_opt = explain->add_option("--row", row, "Dataset row index");
  explain->add_option("--x", ex.vector, "Comma-separated feature vector (original units)");
  explain->add_flag("--perturb", ex.perturb,
                    "Apply the fold's benchmark perturbation before explaining");
  auto* benchmark = app.add_subcommand("benchmark", "Cross-validated evaluation");
  auto* inspect = app.add_subcommand("inspect", "Per-fold threshold and rejection summary");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  if (*k_opt) o.k = k;
  if (*seed_opt) o.seed = seed;
  if (*jobs_opt) o.jobs = jobs;
  if (*row_opt) ex.row = row;

  try {
    const RunConfig config = resolve(o);
    if (*benchmark) return cmd_benchmark(config, out, err);
    if (*inspect) return cmd_inspect(config, out);
    if (*explain) return cmd_explain(config, ex, out, err);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kNotRejected;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kConfigError;
}

}  // namespace sfreject::cli
