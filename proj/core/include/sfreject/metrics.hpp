#pragma once

#include <optional>
#include <vector>

#include "sfreject/dataset.hpp"
#include "sfreject/semifactual.hpp"

namespace sfreject {

// Each metric returns nullopt when there is nothing to average over.

/// Fraction of all semifactuals that are feasible.
std::optional<double> metric_feasibility(const std::vector<ExplanationSet>& sets);

/// Mean over semifactuals of (#changed features) / d.
std::optional<double> metric_sparsity(const std::vector<ExplanationSet>& sets);

/// Per set: mean over unordered pairs of diversity_overlap / d (0 for a
/// single semifactual); averaged over sets. Lower is more diverse.
std::optional<double> metric_diversity(const std::vector<ExplanationSet>& sets,
                                       double change_epsilon = 1e-6);

/// Per set: |(union of changed features) n perturbed| / |perturbed|;
/// averaged over sets.
std::optional<double> metric_recall(const std::vector<ExplanationSet>& sets,
                                    const IndexSet& perturbed_features);

}  // namespace sfreject
