#include <algorithm>
#include <cmath>

#include "sfreject/conformal.hpp"
#include "sfreject/error.hpp"

namespace sfreject {

KneeResult select_threshold_knee(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t distinct = values.empty() ? 0 : 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] != values[i - 1]) ++distinct;
  }
  if (distinct < 3) {
    throw ThresholdSelectionError("knee selection needs at least 3 distinct values, got " +
                                  std::to_string(distinct) + "; supply a threshold explicitly");
  }

  const std::size_t n = values.size();
  const double lo = values.front();
  const double span = values.back() - lo;
  const double last = static_cast<double>(n - 1);

  // Distance below the chord y = x in normalised coordinates; the first
  // maximum wins.
  KneeResult result;
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double gap = static_cast<double>(i) / last - (values[i] - lo) / span;
    if (gap > best + 1e-12) {
      best = gap;
      result.index = i;
    }
  }
  if (best <= 1e-12) {
    result.degenerate = true;
    result.index = (n - 1) / 2;
  }
  result.threshold = values[result.index];
  const auto next = std::upper_bound(values.begin(), values.end(), result.threshold);
  result.separating_threshold =
      next == values.end() ? result.threshold : 0.5 * (result.threshold + *next);
  return result;
}

}  // namespace sfreject
