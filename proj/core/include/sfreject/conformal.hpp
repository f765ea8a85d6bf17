#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sfreject/classifier.hpp"
#include "sfreject/dataset.hpp"
#include "sfreject/reject_option.hpp"

namespace sfreject {

/// Margin non-conformity: max_{i != y} p(i | x) - p(y | x). Lies in [-1, 1];
/// lower means more conforming.
double non_conformity(const ClassProbabilities& probs, int y);
double non_conformity(const ProbabilisticClassifier& model, std::span<const double> x, int y);

struct RejectDecision {
  double credibility = 0.0;
  bool rejected = false;
  /// Empty exactly when rejected (the reject symbol).
  std::optional<int> predicted_class;
};

/// Inductive conformal predictor over a fitted classifier, with the
/// credibility-threshold reject option. Calibration scores are pooled across
/// labels. Immutable once built; all queries are thread-safe.
class ConformalRejector final : public RejectOption {
 public:
  /// Scores every calibration row with its true label. Throws
  /// PreconditionError on an empty calibration set.
  static ConformalRejector calibrate(std::shared_ptr<const ProbabilisticClassifier> model,
                                     const Dataset& data, const IndexSet& calib_rows);

  /// Copy of this rejector with threshold `theta` in (0, 1].
  ConformalRejector with_theta(double theta) const;

  bool has_theta() const { return theta_.has_value(); }
  /// Throws StateError if no threshold has been assigned.
  double theta() const override;

  std::size_t n_features() const override { return model_->n_features(); }
  std::size_t n_classes() const { return model_->n_classes(); }
  const ProbabilisticClassifier& model() const { return *model_; }
  /// Calibration scores in calibration-row order.
  const std::vector<double>& calib_scores() const { return scores_; }

  /// (#{alpha_i >= score} + 1) / (n_calib + 1).
  double p_value_of_score(double score) const;
  double p_value(std::span<const double> x, int y) const;
  std::vector<double> p_values(std::span<const double> x) const;
  /// Largest p-value over all labels.
  double credibility(std::span<const double> x) const;
  double certainty(std::span<const double> x) const override { return credibility(x); }

  /// Throws StateError if no threshold has been assigned.
  RejectDecision decide(std::span<const double> x) const;

 private:
  ConformalRejector(std::shared_ptr<const ProbabilisticClassifier> model,
                    std::vector<double> scores);

  std::shared_ptr<const ProbabilisticClassifier> model_;
  std::vector<double> scores_;
  std::vector<double> sorted_scores_;
  std::optional<double> theta_;
};

struct KneeResult {
  double threshold = 0.0;
  /// Position of the knee in the ascending-sorted input.
  std::size_t index = 0;
  /// True when no point lies below the chord (e.g. a linear ramp); the
  /// threshold is then the middle value of the sorted curve.
  bool degenerate = false;
  /// Midway between `threshold` and the next larger input value, so that
  /// `value < separating_threshold` selects the knee and everything below it.
  /// Equals `threshold` when no larger value exists.
  double separating_threshold = 0.0;
};

/// Kneedle-style threshold: sorts `values` ascending, normalises index and
/// value to [0, 1] and returns the value whose point lies furthest below the
/// chord joining the first and last point. Throws ThresholdSelectionError for
/// fewer than three distinct values.
KneeResult select_threshold_knee(std::vector<double> values);

}  // namespace sfreject
