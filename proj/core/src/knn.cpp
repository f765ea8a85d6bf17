#include "sfreject/knn.hpp"

#include <algorithm>
#include <utility>

#include "sfreject/error.hpp"

namespace sfreject {

KnnClassifier KnnClassifier::fit(const Dataset& data, const IndexSet& rows,
                                 std::size_t k_neighbors, double smoothing) {
  if (rows.empty()) throw FitError("knn: empty training set");
  if (k_neighbors < 1) throw FitError("knn: k_neighbors must be at least 1");
  if (k_neighbors > rows.size()) {
    throw FitError("knn: k_neighbors (" + std::to_string(k_neighbors) +
                   ") exceeds the number of training rows (" + std::to_string(rows.size()) + ")");
  }
  if (smoothing < 0.0) throw FitError("knn: smoothing must be non-negative");

  KnnClassifier model;
  model.n_features_ = data.n_features();
  model.n_classes_ = data.n_classes();
  model.k_ = k_neighbors;
  model.smoothing_ = smoothing;
  model.points_.reserve(rows.size() * data.n_features());
  model.labels_.reserve(rows.size());
  for (std::size_t i : rows) {
    const auto r = data.row(i);
    model.points_.insert(model.points_.end(), r.begin(), r.end());
    model.labels_.push_back(data.label(i));
  }
  return model;
}

ClassProbabilities KnnClassifier::predict_proba(std::span<const double> x) const {
  check_dimension(x);
  const std::size_t n = labels_.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = points_.data() + i * n_features_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_features_; ++j) {
      const double diff = p[j] - x[j];
      s += diff * diff;
    }
    // Squared distance orders identically to Euclidean distance.
    dist[i] = {s, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());

  std::vector<double> counts(n_classes_, smoothing_);
  for (std::size_t m = 0; m < k_; ++m) counts[static_cast<std::size_t>(labels_[dist[m].second])] += 1.0;
  const double total = static_cast<double>(k_) + smoothing_ * static_cast<double>(n_classes_);
  for (double& c : counts) c /= total;
  return ClassProbabilities(std::move(counts));
}

}  // namespace sfreject
