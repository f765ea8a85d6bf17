#pragma once

#include <stdexcept>
#include <string>

namespace sfreject {

/// Base class of every error raised by the library. Each subclass names a
/// category the CLI maps onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries the row/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A feature column that cannot be used (e.g. every cell missing).
class UnusableFeatureError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or parameter combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Classifier could not be fitted on the given rows.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Vector length or class index does not match the model.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Knee selection impossible; the caller has to supply a threshold.
class ThresholdSelectionError : public Error {
 public:
  using Error::Error;
};

/// Object queried before it was fully set up (e.g. threshold unset).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Operation precondition violated by the caller's input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfreject
