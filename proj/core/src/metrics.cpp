#include "sfreject/metrics.hpp"

#include <algorithm>

namespace sfreject {

std::optional<double> metric_feasibility(const std::vector<ExplanationSet>& sets) {
  std::size_t total = 0;
  std::size_t feasible = 0;
  for (const auto& set : sets) {
    for (const auto& sf : set.semifactuals) {
      ++total;
      if (sf.feasible) ++feasible;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(feasible) / static_cast<double>(total);
}

std::optional<double> metric_sparsity(const std::vector<ExplanationSet>& sets) {
  std::size_t total = 0;
  double sum = 0.0;
  for (const auto& set : sets) {
    const auto d = static_cast<double>(set.original_x.size());
    for (const auto& sf : set.semifactuals) {
      ++total;
      sum += static_cast<double>(sf.changed_features.size()) / d;
    }
  }
  if (total == 0) return std::nullopt;
  return sum / static_cast<double>(total);
}

std::optional<double> metric_diversity(const std::vector<ExplanationSet>& sets,
                                       double change_epsilon) {
  if (sets.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& set : sets) {
    const auto& sfs = set.semifactuals;
    const auto d = static_cast<double>(set.original_x.size());
    std::size_t pairs = 0;
    double overlap = 0.0;
    for (std::size_t a = 0; a < sfs.size(); ++a) {
      for (std::size_t b = a + 1; b < sfs.size(); ++b) {
        ++pairs;
        overlap += static_cast<double>(
                       diversity_overlap(sfs[a].delta, sfs[b].delta, change_epsilon)) /
                   d;
      }
    }
    if (pairs > 0) sum += overlap / static_cast<double>(pairs);
  }
  return sum / static_cast<double>(sets.size());
}

std::optional<double> metric_recall(const std::vector<ExplanationSet>& sets,
                                    const IndexSet& perturbed_features) {
  if (sets.empty() || perturbed_features.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& set : sets) {
    BlacklistSet used;
    for (const auto& sf : set.semifactuals) used.insert(sf.changed_features);
    std::size_t hits = 0;
    for (std::size_t j : perturbed_features) {
      if (used.contains(j)) ++hits;
    }
    sum += static_cast<double>(hits) / static_cast<double>(perturbed_features.size());
  }
  return sum / static_cast<double>(sets.size());
}

}  // namespace sfreject
