#pragma once

#include "sfreject/classifier.hpp"

namespace sfreject {

/// k-nearest-neighbours classifier with Euclidean distance. Class
/// probabilities are (smoothed) neighbour label frequencies; ties in distance
/// are broken by training-row order.
class KnnClassifier final : public ProbabilisticClassifier {
 public:
  static KnnClassifier fit(const Dataset& data, const IndexSet& rows, std::size_t k_neighbors = 5,
                           double smoothing = 1e-9);

  std::string name() const override { return "knn"; }
  std::size_t n_features() const override { return n_features_; }
  std::size_t n_classes() const override { return n_classes_; }
  std::size_t k_neighbors() const { return k_; }

  ClassProbabilities predict_proba(std::span<const double> x) const override;

 private:
  KnnClassifier() = default;

  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
  std::size_t k_ = 0;
  double smoothing_ = 0.0;
  std::vector<double> points_;
  std::vector<int> labels_;
};

}  // namespace sfreject
