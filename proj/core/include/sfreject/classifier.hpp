#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sfreject/dataset.hpp"

namespace sfreject {

/// Per-class probability vector p(y | x). Entries lie in [0, 1] and sum to 1.
class ClassProbabilities {
 public:
  /// Throws DimensionError when the invariant does not hold (to 1e-9).
  explicit ClassProbabilities(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t y) const { return probs_[y]; }
  std::span<const double> values() const { return probs_; }

  /// Index of the largest entry; ties go to the lowest index.
  int argmax() const;

 private:
  std::vector<double> probs_;
};

/// Contract shared by every classifier the reject option can wrap. A model
/// is immutable once fitted, so all queries are safe to call concurrently.
///
/// To add a model family (e.g. a random forest), derive from this class,
/// provide a static `fit(const Dataset&, const IndexSet&, ...)`, and register
/// it in `fit_classifier`.
class ProbabilisticClassifier {
 public:
  virtual ~ProbabilisticClassifier() = default;

  virtual std::string name() const = 0;
  virtual std::size_t n_features() const = 0;
  virtual std::size_t n_classes() const = 0;

  /// Throws DimensionError if x.size() != n_features().
  virtual ClassProbabilities predict_proba(std::span<const double> x) const = 0;

  int predict(std::span<const double> x) const { return predict_proba(x).argmax(); }

 protected:
  void check_dimension(std::span<const double> x) const;
};

enum class ClassifierKind { kKnn, kGnb };

std::string to_string(ClassifierKind kind);
/// Accepts "knn" and "gnb"; throws ConfigError otherwise.
ClassifierKind parse_classifier_kind(const std::string& name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kKnn;
  std::size_t k_neighbors = 5;
  /// Added to every neighbour count before normalisation.
  double knn_smoothing = 1e-9;
  double gnb_var_floor = 1e-9;
};

std::shared_ptr<const ProbabilisticClassifier> fit_classifier(const ClassifierConfig& config,
                                                              const Dataset& data,
                                                              const IndexSet& rows);

}  // namespace sfreject
