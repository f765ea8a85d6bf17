#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sfreject/dataset.hpp"
#include "sfreject/reject_option.hpp"

namespace sfreject {

/// Gaussian noise on a fixed random subset of the features.
struct PerturbationSpec {
  double fraction = 0.3;
  /// In standardized units.
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  /// Sorted; max(1, round(fraction * d)) entries.
  IndexSet perturbed_features;

  /// Draws the perturbed feature subset from `seed`.
  static PerturbationSpec draw(std::size_t n_features, double fraction, double noise_std,
                               std::uint64_t seed);
  void validate(std::size_t n_features) const;
};

/// x with N(0, noise_std^2) added to every perturbed feature. The noise is a
/// function of (spec.seed, sample_key) only.
Vector perturb(std::span<const double> x, const PerturbationSpec& spec, std::uint64_t sample_key);

struct RejectFlip {
  std::size_t row = 0;
  Vector x;
  Vector x_perturbed;
  double certainty_before = 0.0;
  double certainty_after = 0.0;
};

/// Test rows that are accepted as they are but rejected once perturbed. The
/// perturbation of row i uses sample key i.
std::vector<RejectFlip> select_reject_flips(const RejectOption& reject_option,
                                            const Dataset& data, const IndexSet& test_rows,
                                            const PerturbationSpec& spec);

/// splitmix64 step; used to derive independent seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sfreject
