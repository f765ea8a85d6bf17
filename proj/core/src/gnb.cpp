#include "sfreject/gnb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sfreject/error.hpp"

namespace sfreject {

GaussianNaiveBayes GaussianNaiveBayes::fit(const Dataset& data, const IndexSet& rows,
                                           double var_floor) {
  if (rows.empty()) throw FitError("gnb: empty training set");
  if (!(var_floor > 0.0)) throw FitError("gnb: variance floor must be positive");
  const std::size_t c = data.n_classes();
  const std::size_t d = data.n_features();

  std::vector<std::size_t> counts(c, 0);
  std::vector<double> means(c * d, 0.0);
  std::vector<double> vars(c * d, 0.0);
  for (std::size_t i : rows) {
    const auto y = static_cast<std::size_t>(data.label(i));
    ++counts[y];
    for (std::size_t j = 0; j < d; ++j) means[y * d + j] += data.at(i, j);
  }
  for (std::size_t y = 0; y < c; ++y) {
    if (counts[y] == 0) {
      throw FitError("gnb: class '" + data.class_names()[y] + "' has no training rows");
    }
    for (std::size_t j = 0; j < d; ++j) means[y * d + j] /= static_cast<double>(counts[y]);
  }
  for (std::size_t i : rows) {
    const auto y = static_cast<std::size_t>(data.label(i));
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data.at(i, j) - means[y * d + j];
      vars[y * d + j] += diff * diff;
    }
  }
  for (std::size_t y = 0; y < c; ++y) {
    for (std::size_t j = 0; j < d; ++j) {
      vars[y * d + j] = std::max(vars[y * d + j] / static_cast<double>(counts[y]), var_floor);
    }
  }

  GaussianNaiveBayes model;
  model.n_features_ = d;
  model.priors_.resize(c);
  for (std::size_t y = 0; y < c; ++y) {
    model.priors_[y] = static_cast<double>(counts[y]) / static_cast<double>(rows.size());
  }
  model.means_ = std::move(means);
  model.variances_ = std::move(vars);
  return model;
}

ClassProbabilities GaussianNaiveBayes::predict_proba(std::span<const double> x) const {
  check_dimension(x);
  const std::size_t c = priors_.size();
  const std::size_t d = n_features_;
  std::vector<double> log_joint(c);
  for (std::size_t y = 0; y < c; ++y) {
    double lj = std::log(priors_[y]);
    for (std::size_t j = 0; j < d; ++j) {
      const double var = variances_[y * d + j];
      const double diff = x[j] - means_[y * d + j];
      lj -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
    }
    log_joint[y] = lj;
  }
  const double top = *std::max_element(log_joint.begin(), log_joint.end());
  if (!std::isfinite(top)) {
    // Every likelihood underflowed; nothing distinguishes the classes.
    return ClassProbabilities(std::vector<double>(c, 1.0 / static_cast<double>(c)));
  }
  double norm = 0.0;
  for (double lj : log_joint) norm += std::exp(lj - top);
  std::vector<double> probs(c);
  for (std::size_t y = 0; y < c; ++y) probs[y] = std::exp(log_joint[y] - top) / norm;
  return ClassProbabilities(std::move(probs));
}

}  // namespace sfreject
