#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sfreject {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

/// Dense labelled data set. Features are stored row-major; labels are encoded
/// as 0..n_classes()-1.
class Dataset {
 public:
  Dataset() = default;

  /// Validates shapes and label range; throws ConfigError on violation.
  Dataset(std::vector<double> features, std::size_t n_features,
          std::vector<int> labels, std::vector<std::string> feature_names,
          std::vector<std::string> class_names);

  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return class_names_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  double at(std::size_t i, std::size_t j) const {
    return features_[i * n_features_ + j];
  }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

 private:
  std::vector<double> features_;
  std::size_t n_features_ = 0;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
};

/// Reads a comma-separated file with a header row. Labels are re-encoded in
/// order of first appearance. Empty cells are missing values: with
/// `impute_missing` they become the column mean over non-missing cells,
/// otherwise they raise ParseError.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 bool impute_missing = false);

/// Per-feature affine standardization z = (x - mean) / std.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> means, std::vector<double> std_devs);

  std::size_t n_features() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& std_devs() const { return std_devs_; }

  Vector transform(std::span<const double> x) const;
  Vector inverse_transform(std::span<const double> z) const;
  /// Converts a difference of standardized vectors back to original units.
  Vector inverse_transform_delta(std::span<const double> dz) const;
  /// Standardizes every row of `data`.
  Dataset transform(const Dataset& data) const;

 private:
  std::vector<double> means_;
  std::vector<double> std_devs_;
};

/// Population mean/std over `rows`; constant features get std 1.
Standardizer fit_standardizer(const Dataset& data, const IndexSet& rows);

struct FoldSplit {
  IndexSet train_indices;
  IndexSet calib_indices;
  IndexSet test_indices;
};

/// Shuffled k-fold split. For every fold the non-test rows are split again
/// into classifier-training rows and conformal calibration rows, with
/// round(calib_fraction * n_non_test) calibration rows.
std::vector<FoldSplit> split_folds(std::size_t n_samples, std::size_t n_folds,
                                   double calib_fraction, std::uint64_t seed);

inline std::vector<FoldSplit> split_folds(const Dataset& data, std::size_t n_folds,
                                          double calib_fraction, std::uint64_t seed) {
  return split_folds(data.n_samples(), n_folds, calib_fraction, seed);
}

}  // namespace sfreject
