#include "sfreject/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sfreject/error.hpp"
#include "sfreject/metrics.hpp"

namespace sfreject {

std::string to_string(KneeSource s) {
  return s == KneeSource::kTrain ? "train" : "calibration";
}

KneeSource parse_knee_source(const std::string& name) {
  if (name == "train") return KneeSource::kTrain;
  if (name == "calibration") return KneeSource::kCalibration;
  throw ConfigError("unknown knee source '" + name + "' (expected train or calibration)");
}

SemifactualConfig default_semifactual_config() {
  SemifactualConfig c;
  c.weights.c_feasibility = 100.0;
  c.weights.c_sf = 100.0;
  c.weights.mu = 1;
  c.optimizer.initial_step = 3.0;
  return c;
}

void ExperimentConfig::validate() const {
  semifactual.validate();
  if (theta && !(*theta > 0.0 && *theta <= 1.0)) {
    throw ConfigError("theta must lie in (0, 1]");
  }
  if (!(perturb_fraction > 0.0 && perturb_fraction <= 1.0)) {
    throw ConfigError("perturbation fraction must lie in (0, 1]");
  }
  if (!(noise_std > 0.0)) throw ConfigError("noise_std must be > 0");
  if (n_folds < 2) throw ConfigError("n_folds must be >= 2");
  if (!(calib_fraction > 0.0 && calib_fraction < 1.0)) {
    throw ConfigError("calib_fraction must lie in (0, 1)");
  }
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(box_margin >= 0.0)) throw ConfigError("box_margin must be >= 0");
  if (!(box_radius >= 0.0)) throw ConfigError("box_radius must be >= 0");
  if (classifier.k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<FoldSplit> experiment_folds(const Dataset& data, const ExperimentConfig& config) {
  return split_folds(data, config.n_folds, config.calib_fraction, mix_seed(config.seed, 1));
}

FoldModel fit_fold(const Dataset& data, const std::vector<FoldSplit>& folds, std::size_t fold,
                   const ExperimentConfig& config) {
  if (fold >= folds.size()) throw ConfigError("fold index out of range");
  FoldModel m;
  m.fold = fold;
  m.split = folds[fold];
  m.standardizer = fit_standardizer(data, m.split.train_indices);
  m.standardized = m.standardizer.transform(data);

  auto model = fit_classifier(config.classifier, m.standardized, m.split.train_indices);
  auto rejector = ConformalRejector::calibrate(model, m.standardized, m.split.calib_indices);

  double theta = 0.0;
  if (config.theta) {
    theta = *config.theta;
  } else {
    const auto& rows = config.knee_source == KneeSource::kTrain ? m.split.train_indices
                                                                : m.split.calib_indices;
    std::vector<double> credibility;
    credibility.reserve(rows.size());
    for (std::size_t i : rows) {
      credibility.push_back(rejector.credibility(m.standardized.row(i)));
    }
    m.knee = select_threshold_knee(std::move(credibility));
    theta = m.knee->separating_threshold;
  }
  m.rejector = std::make_shared<const ConformalRejector>(rejector.with_theta(theta));
  m.perturbation = PerturbationSpec::draw(data.n_features(), config.perturb_fraction,
                                          config.noise_std, mix_seed(config.seed, 100 + fold));
  return m;
}

SearchBox explanation_box(const FoldModel& m, std::span<const double> x,
                          const ExperimentConfig& config) {
  if (config.box_radius > 0.0) {
    SearchBox box{Vector(x.begin(), x.end()), Vector(x.begin(), x.end())};
    for (double& v : box.lower) v -= config.box_radius;
    for (double& v : box.upper) v += config.box_radius;
    return box;
  }
  return SearchBox::around(m.standardized, m.split.train_indices, x, config.box_margin);
}

MetricSummary summarize(const std::vector<std::optional<double>>& values) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    ++s.n;
    sum += *v;
  }
  if (s.n == 0) return s;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - s.mean) * (*v - s.mean);
  }
  s.variance = sq / static_cast<double>(s.n);
  s.std_dev = std::sqrt(s.variance);
  return s;
}

ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config,
                                const std::string& dataset_name) {
  config.validate();
  ExperimentReport report;
  report.dataset_name = dataset_name;
  report.model_name = to_string(config.classifier.kind);
  report.n_samples = data.n_samples();
  report.n_features = data.n_features();
  report.n_classes = data.n_classes();

  const auto folds = experiment_folds(data, config);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    FoldReport fr;
    fr.fold = f;
    fr.n_train = folds[f].train_indices.size();
    fr.n_calib = folds[f].calib_indices.size();
    fr.n_test = folds[f].test_indices.size();

    FoldModel m;
    try {
      m = fit_fold(data, folds, f, config);
    } catch (const ThresholdSelectionError& e) {
      fr.flag = e.what();
      report.folds.push_back(std::move(fr));
      continue;
    }
    const auto& rejector = *m.rejector;
    fr.theta = rejector.theta();
    fr.knee_degenerate = m.knee && m.knee->degenerate;
    fr.perturbed_features = m.perturbation.perturbed_features;
    for (std::size_t i : folds[f].test_indices) {
      if (rejector.rejects(m.standardized.row(i))) ++fr.n_rejected_test;
    }

    const auto flips =
        select_reject_flips(rejector, m.standardized, folds[f].test_indices, m.perturbation);
    fr.n_flips = flips.size();

    std::vector<ExplanationSet> sets(flips.size());
    parallel_for(flips.size(), config.jobs, [&](std::size_t i) {
      SemifactualConfig sc = config.semifactual;
      sc.box = explanation_box(m, flips[i].x_perturbed, config);
      sc.optimizer.seed = mix_seed(config.seed, 1000003 * (f + 1) + flips[i].row);
      sets[i] = compute_diverse_semifactuals(flips[i].x_perturbed, config.k, rejector, sc);
    });

    for (std::size_t i = 0; i < flips.size(); ++i) {
      ExplainedSample s;
      s.fold = f;
      s.row = flips[i].row;
      s.x_original = m.standardizer.inverse_transform(flips[i].x_perturbed);
      for (const auto& sf : sets[i].semifactuals) {
        s.deltas_original.push_back(m.standardizer.inverse_transform_delta(sf.delta));
        ++fr.n_semifactuals;
      }
      s.explanation = sets[i];
      report.samples.push_back(std::move(s));
    }

    fr.metrics.feasibility = metric_feasibility(sets);
    fr.metrics.sparsity = metric_sparsity(sets);
    fr.metrics.diversity = metric_diversity(sets, config.semifactual.change_epsilon);
    fr.metrics.recall = metric_recall(sets, m.perturbation.perturbed_features);
    if (flips.empty()) fr.flag = "no accepted-then-rejected test rows";
    report.folds.push_back(std::move(fr));
  }

  std::vector<std::optional<double>> feas, spars, div, rec;
  for (const auto& fr : report.folds) {
    feas.push_back(fr.metrics.feasibility);
    spars.push_back(fr.metrics.sparsity);
    div.push_back(fr.metrics.diversity);
    rec.push_back(fr.metrics.recall);
  }
  report.feasibility = summarize(feas);
  report.sparsity = summarize(spars);
  report.diversity = summarize(div);
  report.recall = summarize(rec);
  return report;
}

std::vector<FoldInspection> inspect_rejection(const Dataset& data, const ExperimentConfig& config) {
  config.validate();
  const auto folds = experiment_folds(data, config);
  std::vector<FoldInspection> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const FoldModel m = fit_fold(data, folds, f, config);
    FoldInspection fi;
    fi.fold = f;
    fi.theta = m.rejector->theta();
    fi.knee_degenerate = m.knee && m.knee->degenerate;
    fi.n_test = folds[f].test_indices.size();
    for (std::size_t i : folds[f].test_indices) {
      const double c = m.rejector->credibility(m.standardized.row(i));
      if (c < fi.theta) ++fi.n_rejected;
      const auto bucket = std::min<std::size_t>(9, static_cast<std::size_t>(c * 10.0));
      ++fi.histogram[bucket];
    }
    out.push_back(fi);
  }
  return out;
}

}  // namespace sfreject
