#include "sfreject/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfreject/error.hpp"

namespace sfreject {

double non_conformity(const ClassProbabilities& probs, int y) {
  if (y < 0 || static_cast<std::size_t>(y) >= probs.size()) {
    throw DimensionError("non_conformity: class " + std::to_string(y) + " out of range");
  }
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (static_cast<int>(i) != y) other = std::max(other, probs[i]);
  }
  return other - probs[static_cast<std::size_t>(y)];
}

double non_conformity(const ProbabilisticClassifier& model, std::span<const double> x, int y) {
  return non_conformity(model.predict_proba(x), y);
}

ConformalRejector::ConformalRejector(std::shared_ptr<const ProbabilisticClassifier> model,
                                     std::vector<double> scores)
    : model_(std::move(model)), scores_(std::move(scores)), sorted_scores_(scores_) {
  std::sort(sorted_scores_.begin(), sorted_scores_.end());
}

ConformalRejector ConformalRejector::calibrate(
    std::shared_ptr<const ProbabilisticClassifier> model, const Dataset& data,
    const IndexSet& calib_rows) {
  if (!model) throw PreconditionError("calibrate: no model");
  if (calib_rows.empty()) throw PreconditionError("calibrate: empty calibration set");
  std::vector<double> scores;
  scores.reserve(calib_rows.size());
  for (std::size_t i : calib_rows) {
    scores.push_back(non_conformity(*model, data.row(i), data.label(i)));
  }
  return ConformalRejector(std::move(model), std::move(scores));
}

ConformalRejector ConformalRejector::with_theta(double theta) const {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ConfigError("rejection threshold must lie in (0, 1], got " + std::to_string(theta));
  }
  ConformalRejector copy = *this;
  copy.theta_ = theta;
  return copy;
}

double ConformalRejector::theta() const {
  if (!theta_) throw StateError("rejection threshold has not been set");
  return *theta_;
}

double ConformalRejector::p_value_of_score(double score) const {
  const auto first_ge = std::lower_bound(sorted_scores_.begin(), sorted_scores_.end(), score);
  const auto n_ge = static_cast<double>(sorted_scores_.end() - first_ge);
  return (n_ge + 1.0) / (static_cast<double>(sorted_scores_.size()) + 1.0);
}

double ConformalRejector::p_value(std::span<const double> x, int y) const {
  return p_value_of_score(non_conformity(*model_, x, y));
}

std::vector<double> ConformalRejector::p_values(std::span<const double> x) const {
  const auto probs = model_->predict_proba(x);
  std::vector<double> out(probs.size());
  for (std::size_t y = 0; y < probs.size(); ++y) {
    out[y] = p_value_of_score(non_conformity(probs, static_cast<int>(y)));
  }
  return out;
}

double ConformalRejector::credibility(std::span<const double> x) const {
  const auto p = p_values(x);
  return *std::max_element(p.begin(), p.end());
}

RejectDecision ConformalRejector::decide(std::span<const double> x) const {
  const double threshold = theta();
  const auto p = p_values(x);
  const auto best = std::max_element(p.begin(), p.end());  // first maximum
  RejectDecision decision;
  decision.credibility = *best;
  decision.rejected = decision.credibility < threshold;
  if (!decision.rejected) decision.predicted_class = static_cast<int>(best - p.begin());
  return decision;
}

}  // namespace sfreject
