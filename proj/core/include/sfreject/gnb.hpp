#pragma once

#include "sfreject/classifier.hpp"

namespace sfreject {

/// Gaussian naive Bayes. Likelihoods are combined in log space and normalised
/// with log-sum-exp, so probabilities stay finite for all finite inputs.
class GaussianNaiveBayes final : public ProbabilisticClassifier {
 public:
  /// Throws FitError if some class has no row in `rows`.
  static GaussianNaiveBayes fit(const Dataset& data, const IndexSet& rows,
                                double var_floor = 1e-9);

  std::string name() const override { return "gnb"; }
  std::size_t n_features() const override { return n_features_; }
  std::size_t n_classes() const override { return priors_.size(); }

  const std::vector<double>& priors() const { return priors_; }
  /// Row-major n_classes x n_features.
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& variances() const { return variances_; }

  ClassProbabilities predict_proba(std::span<const double> x) const override;

 private:
  GaussianNaiveBayes() = default;

  std::size_t n_features_ = 0;
  std::vector<double> priors_;
  std::vector<double> means_;
  std::vector<double> variances_;
};

}  // namespace sfreject
