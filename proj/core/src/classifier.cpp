#include "sfreject/classifier.hpp"

#include <cmath>
#include <numeric>

#include "sfreject/error.hpp"
#include "sfreject/gnb.hpp"
#include "sfreject/knn.hpp"

namespace sfreject {

ClassProbabilities::ClassProbabilities(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DimensionError("class probabilities: empty vector");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DimensionError("class probabilities: entry outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DimensionError("class probabilities: entries do not sum to 1");
  }
}

int ClassProbabilities::argmax() const {
  std::size_t best = 0;
  for (std::size_t y = 1; y < probs_.size(); ++y) {
    if (probs_[y] > probs_[best]) best = y;
  }
  return static_cast<int>(best);
}

void ProbabilisticClassifier::check_dimension(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw DimensionError(name() + ": input has " + std::to_string(x.size()) +
                         " features, model expects " + std::to_string(n_features()));
  }
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kKnn:
      return "knn";
    case ClassifierKind::kGnb:
      return "gnb";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(const std::string& name) {
  if (name == "knn") return ClassifierKind::kKnn;
  if (name == "gnb") return ClassifierKind::kGnb;
  throw ConfigError("unknown model '" + name + "' (expected knn or gnb)");
}

std::shared_ptr<const ProbabilisticClassifier> fit_classifier(const ClassifierConfig& config,
                                                              const Dataset& data,
                                                              const IndexSet& rows) {
  switch (config.kind) {
    case ClassifierKind::kKnn:
      return std::make_shared<KnnClassifier>(
          KnnClassifier::fit(data, rows, config.k_neighbors, config.knn_smoothing));
    case ClassifierKind::kGnb:
      return std::make_shared<GaussianNaiveBayes>(
          GaussianNaiveBayes::fit(data, rows, config.gnb_var_floor));
  }
  throw ConfigError("unknown classifier kind");
}

}  // namespace sfreject
