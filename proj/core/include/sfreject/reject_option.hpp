#pragma once

#include <cstddef>
#include <span>

namespace sfreject {

/// A certainty function r(x) together with a threshold theta: the input is
/// rejected iff r(x) < theta. Everything that explains rejects only talks to
/// this interface, so any reject option can be plugged in.
class RejectOption {
 public:
  virtual ~RejectOption() = default;

  virtual std::size_t n_features() const = 0;
  virtual double certainty(std::span<const double> x) const = 0;
  virtual double theta() const = 0;

  bool rejects(std::span<const double> x) const { return certainty(x) < theta(); }
};

}  // namespace sfreject
