#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfreject/classifier.hpp"
#include "sfreject/conformal.hpp"
#include "sfreject/dataset.hpp"
#include "sfreject/perturbation.hpp"
#include "sfreject/semifactual.hpp"

namespace sfreject {

/// Which rows' credibility values feed knee selection.
enum class KneeSource { kTrain, kCalibration };

std::string to_string(KneeSource s);
KneeSource parse_knee_source(const std::string& name);

/// Semifactual settings used by the experiment harness unless overridden.
SemifactualConfig default_semifactual_config();

struct ExperimentConfig {
  ClassifierConfig classifier;
  /// `box` is ignored here; a box is built per sample from `box_margin` /
  /// `box_radius`. Harness defaults: hinge weights 100, mu = 1,
  /// initial simplex step 3.
  SemifactualConfig semifactual = default_semifactual_config();
  /// Fixed threshold, or knee selection on training-row credibility if empty.
  std::optional<double> theta;
  KneeSource knee_source = KneeSource::kTrain;
  double perturb_fraction = 0.3;
  double noise_std = 1.0;
  std::size_t n_folds = 5;
  double calib_fraction = 0.3;
  std::size_t k = 3;
  std::uint64_t seed = 0;
  /// Search box per explained input: the training-data range widened by
  /// `box_margin`, or, when `box_radius` > 0, the cube x +/- box_radius.
  double box_margin = 0.0;
  double box_radius = 3.0;
  /// Worker threads for per-sample explanations; 0 = hardware concurrency.
  std::size_t jobs = 0;

  void validate() const;
};

/// Everything fitted on one fold: standardization, classifier, calibrated
/// reject option with its threshold, and the fold's perturbation.
struct FoldModel {
  std::size_t fold = 0;
  FoldSplit split;
  Standardizer standardizer;
  /// Whole data set in the fold's standardized space.
  Dataset standardized;
  std::shared_ptr<const ConformalRejector> rejector;
  std::optional<KneeResult> knee;
  PerturbationSpec perturbation;
};

/// Fits fold `fold` of `folds` (all in original units in `data`).
FoldModel fit_fold(const Dataset& data, const std::vector<FoldSplit>& folds, std::size_t fold,
                   const ExperimentConfig& config);

/// Search box for explaining `x` under `config` on fold model `m`.
SearchBox explanation_box(const FoldModel& m, std::span<const double> x,
                          const ExperimentConfig& config);

/// Folds shared by every command for a given config.
std::vector<FoldSplit> experiment_folds(const Dataset& data, const ExperimentConfig& config);

struct MetricValues {
  std::optional<double> feasibility;
  std::optional<double> sparsity;
  std::optional<double> diversity;
  std::optional<double> recall;
};

struct ExplainedSample {
  std::size_t fold = 0;
  std::size_t row = 0;
  /// Perturbed input in original units.
  Vector x_original;
  /// Per semifactual: x_sf - x in original units.
  std::vector<Vector> deltas_original;
  ExplanationSet explanation;
};

struct FoldReport {
  std::size_t fold = 0;
  double theta = 0.0;
  bool knee_degenerate = false;
  std::size_t n_train = 0;
  std::size_t n_calib = 0;
  std::size_t n_test = 0;
  std::size_t n_rejected_test = 0;
  std::size_t n_flips = 0;
  std::size_t n_semifactuals = 0;
  IndexSet perturbed_features;
  MetricValues metrics;
  /// Set when the fold could not contribute metric values.
  std::string flag;
};

struct MetricSummary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Population variance over folds.
  double variance = 0.0;
  double std_dev = 0.0;
};

struct ExperimentReport {
  std::string dataset_name;
  std::string model_name;
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<FoldReport> folds;
  MetricSummary feasibility;
  MetricSummary sparsity;
  MetricSummary diversity;
  MetricSummary recall;
  std::vector<ExplainedSample> samples;
};

MetricSummary summarize(const std::vector<std::optional<double>>& values);

/// Cross-validated protocol: per fold fit, calibrate, pick the threshold,
/// perturb test rows, explain every accepted-then-rejected row with k diverse
/// semifactuals, and score the explanations.
ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config,
                                const std::string& dataset_name = "");

struct FoldInspection {
  std::size_t fold = 0;
  double theta = 0.0;
  bool knee_degenerate = false;
  std::size_t n_test = 0;
  std::size_t n_rejected = 0;
  /// Test-row credibility counts in [0, 0.1), ..., [0.9, 1.0].
  std::array<std::size_t, 10> histogram{};
};

std::vector<FoldInspection> inspect_rejection(const Dataset& data, const ExperimentConfig& config);

/// Runs `body(i)` for i in [0, n) on up to `jobs` threads (0 = hardware
/// concurrency). The first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace sfreject
