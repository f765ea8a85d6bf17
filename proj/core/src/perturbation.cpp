#include "sfreject/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sfreject/error.hpp"

namespace sfreject {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PerturbationSpec PerturbationSpec::draw(std::size_t n_features, double fraction,
                                        double noise_std, std::uint64_t seed) {
  PerturbationSpec spec;
  spec.fraction = fraction;
  spec.noise_std = noise_std;
  spec.seed = seed;
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("perturbation fraction must lie in (0, 1]");
  }
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n_features))));
  IndexSet all(n_features);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::shuffle(all.begin(), all.end(), rng);
  spec.perturbed_features.assign(all.begin(),
                                 all.begin() + static_cast<std::ptrdiff_t>(std::min(count, n_features)));
  std::sort(spec.perturbed_features.begin(), spec.perturbed_features.end());
  spec.validate(n_features);
  return spec;
}

void PerturbationSpec::validate(std::size_t n_features) const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("perturbation fraction must lie in (0, 1]");
  }
  if (!(noise_std > 0.0)) throw ConfigError("perturbation noise_std must be > 0");
  for (std::size_t j : perturbed_features) {
    if (j >= n_features) throw ConfigError("perturbed feature index out of range");
  }
}

Vector perturb(std::span<const double> x, const PerturbationSpec& spec, std::uint64_t sample_key) {
  Vector out(x.begin(), x.end());
  std::mt19937_64 rng(mix_seed(spec.seed, sample_key + 1));
  std::normal_distribution<double> noise(0.0, spec.noise_std);
  for (std::size_t j : spec.perturbed_features) {
    if (j >= out.size()) throw DimensionError("perturb: feature index out of range");
    out[j] += noise(rng);
  }
  return out;
}

std::vector<RejectFlip> select_reject_flips(const RejectOption& reject_option,
                                            const Dataset& data, const IndexSet& test_rows,
                                            const PerturbationSpec& spec) {
  const double theta = reject_option.theta();
  std::vector<RejectFlip> flips;
  for (std::size_t i : test_rows) {
    RejectFlip flip;
    flip.row = i;
    flip.x.assign(data.row(i).begin(), data.row(i).end());
    flip.certainty_before = reject_option.certainty(flip.x);
    if (flip.certainty_before < theta) continue;
    flip.x_perturbed = perturb(flip.x, spec, i);
    flip.certainty_after = reject_option.certainty(flip.x_perturbed);
    if (flip.certainty_after < theta) flips.push_back(std::move(flip));
  }
  return flips;
}

}  // namespace sfreject
