#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sfreject/dataset.hpp"

namespace sfreject {

/// Downhill-simplex settings. Every start builds an axis-aligned simplex
/// around x0; the first uses offsets of exactly `initial_step`, later starts
/// draw each offset's magnitude from [0.5, 1.5] * initial_step and its sign at
/// random from `seed`.
struct SimplexConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Iteration budget per start.
  std::size_t max_iter = 500;
  /// Stop when the simplex diameter (max-norm) falls below this.
  double x_tol = 1e-6;
  /// Stop when the spread of vertex values falls below this.
  double f_tol = 1e-9;
  double initial_step = 0.5;
  /// Number of independent starts; the best result is kept.
  std::size_t n_restarts = 3;
  std::uint64_t seed = 0;

  /// Throws ConfigError when a coefficient is out of range.
  void validate() const;
};

struct OptimResult {
  Vector x_best;
  double f_best = 0.0;
  std::size_t n_evals = 0;
  std::size_t n_iterations = 0;
  /// Some start met x_tol or f_tol before max_iter.
  bool converged = false;
  /// Best vertex value after each iteration, one list per start.
  std::vector<std::vector<double>> best_trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead over the coordinates not listed in `frozen`; frozen
/// coordinates stay at their x0 values. Non-finite objective values during
/// the search count as +infinity. Throws PreconditionError if the objective
/// is not finite at x0 or `frozen` names an out-of-range coordinate.
OptimResult minimize(const Objective& objective, std::span<const double> x0,
                     const SimplexConfig& config, const IndexSet& frozen = {});

}  // namespace sfreject
