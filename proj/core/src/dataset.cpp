#include "sfreject/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "sfreject/error.hpp"

namespace sfreject {

Dataset::Dataset(std::vector<double> features, std::size_t n_features,
                 std::vector<int> labels, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : features_(std::move(features)),
      n_features_(n_features),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
  if (n_features_ < 1) throw ConfigError("dataset needs at least one feature");
  if (class_names_.size() < 2) throw ConfigError("dataset needs at least two classes");
  if (features_.size() != labels_.size() * n_features_) {
    throw ConfigError("feature matrix has " + std::to_string(features_.size()) +
                      " cells, expected " + std::to_string(labels_.size()) + " x " +
                      std::to_string(n_features_));
  }
  if (feature_names_.size() != n_features_) {
    throw ConfigError("expected " + std::to_string(n_features_) + " feature names");
  }
  const int n_classes = static_cast<int>(class_names_.size());
  for (int y : labels_) {
    if (y < 0 || y >= n_classes) {
      throw ConfigError("label " + std::to_string(y) + " outside [0, " +
                        std::to_string(n_classes) + ")");
    }
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(const std::string& cell) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 bool impute_missing) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header row");
  const auto header = split_line(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw ParseError(path.string() + ": label column '" + label_column + "' not in header");
  }
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_col) feature_names.push_back(header[j]);
  }
  const std::size_t d = feature_names.size();

  std::vector<std::optional<double>> cells;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_index;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_col) {
        if (fields[j].empty()) {
          throw ParseError(path.string() + ": row " + std::to_string(line_no) +
                           ": missing label");
        }
        auto [it, inserted] =
            class_index.try_emplace(fields[j], static_cast<int>(class_names.size()));
        if (inserted) class_names.push_back(fields[j]);
        labels.push_back(it->second);
        continue;
      }
      if (fields[j].empty()) {
        if (!impute_missing) {
          throw ParseError(path.string() + ": row " + std::to_string(line_no) +
                           ", column '" + header[j] + "': missing value");
        }
        cells.emplace_back(std::nullopt);
        continue;
      }
      const auto value = parse_real(fields[j]);
      if (!value) {
        throw ParseError(path.string() + ": row " + std::to_string(line_no) +
                         ", column '" + header[j] + "': cannot parse '" + fields[j] +
                         "' as a real number");
      }
      cells.emplace_back(value);
    }
  }

  const std::size_t n = labels.size();
  std::vector<double> features(n * d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (const auto& c = cells[i * d + j]) {
        sum += *c;
        ++present;
      }
    }
    if (present == 0) {
      throw UnusableFeatureError(path.string() + ": column '" + feature_names[j] +
                                 "' has no values");
    }
    const double mean = sum / static_cast<double>(present);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = cells[i * d + j];
      features[i * d + j] = c ? *c : mean;
    }
  }

  return Dataset(std::move(features), d, std::move(labels), std::move(feature_names),
                 std::move(class_names));
}

Standardizer::Standardizer(std::vector<double> means, std::vector<double> std_devs)
    : means_(std::move(means)), std_devs_(std::move(std_devs)) {
  if (means_.size() != std_devs_.size()) {
    throw DimensionError("standardizer means and std devs differ in length");
  }
  for (double s : std_devs_) {
    if (!(s > 0.0)) throw ConfigError("standardizer std devs must be positive");
  }
}

Vector Standardizer::transform(std::span<const double> x) const {
  if (x.size() != means_.size()) throw DimensionError("standardizer: dimension mismatch");
  Vector z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - means_[j]) / std_devs_[j];
  return z;
}

Vector Standardizer::inverse_transform(std::span<const double> z) const {
  if (z.size() != means_.size()) throw DimensionError("standardizer: dimension mismatch");
  Vector x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * std_devs_[j] + means_[j];
  return x;
}

Vector Standardizer::inverse_transform_delta(std::span<const double> dz) const {
  if (dz.size() != means_.size()) throw DimensionError("standardizer: dimension mismatch");
  Vector dx(dz.size());
  for (std::size_t j = 0; j < dz.size(); ++j) dx[j] = dz[j] * std_devs_[j];
  return dx;
}

Dataset Standardizer::transform(const Dataset& data) const {
  if (data.n_features() != means_.size()) {
    throw DimensionError("standardizer: dimension mismatch");
  }
  const std::size_t d = data.n_features();
  std::vector<double> out(data.features().size());
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out[i * d + j] = (data.at(i, j) - means_[j]) / std_devs_[j];
    }
  }
  return Dataset(std::move(out), d, data.labels(), data.feature_names(), data.class_names());
}

Standardizer fit_standardizer(const Dataset& data, const IndexSet& rows) {
  if (rows.empty()) throw PreconditionError("fit_standardizer: empty row set");
  const std::size_t d = data.n_features();
  std::vector<double> means(d, 0.0);
  std::vector<double> stds(d, 0.0);
  const double n = static_cast<double>(rows.size());
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < d; ++j) means[j] += data.at(i, j);
  }
  for (double& m : means) m /= n;
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = data.at(i, j) - means[j];
      stds[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    stds[j] = std::sqrt(stds[j] / n);
    // Constant (or numerically constant) feature.
    if (!(stds[j] > 1e-12 * std::max(1.0, std::abs(means[j])))) stds[j] = 1.0;
  }
  return Standardizer(std::move(means), std::move(stds));
}

std::vector<FoldSplit> split_folds(std::size_t n_samples, std::size_t n_folds,
                                   double calib_fraction, std::uint64_t seed) {
  if (n_folds < 2) throw ConfigError("n_folds must be at least 2");
  if (n_folds > n_samples) {
    throw ConfigError("n_folds (" + std::to_string(n_folds) + ") exceeds the number of rows (" +
                      std::to_string(n_samples) + ")");
  }
  if (!(calib_fraction > 0.0 && calib_fraction < 1.0)) {
    throw ConfigError("calib_fraction must lie in (0, 1)");
  }

  IndexSet order(n_samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<FoldSplit> folds(n_folds);
  std::size_t begin = 0;
  for (std::size_t f = 0; f < n_folds; ++f) {
    const std::size_t size = n_samples / n_folds + (f < n_samples % n_folds ? 1 : 0);
    const std::size_t end = begin + size;
    auto& fold = folds[f];
    fold.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                             order.begin() + static_cast<std::ptrdiff_t>(end));

    IndexSet rest;
    rest.reserve(n_samples - size);
    rest.insert(rest.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(begin));
    rest.insert(rest.end(), order.begin() + static_cast<std::ptrdiff_t>(end), order.end());
    const auto n_calib =
        static_cast<std::size_t>(std::lround(calib_fraction * static_cast<double>(rest.size())));
    if (n_calib == 0 || n_calib >= rest.size()) {
      throw ConfigError("fold " + std::to_string(f) + " has " + std::to_string(rest.size()) +
                        " non-test rows; too few to carve out both training and calibration rows");
    }
    // `order` is already shuffled, so the tail of `rest` is a random subset.
    fold.train_indices.assign(rest.begin(), rest.end() - static_cast<std::ptrdiff_t>(n_calib));
    fold.calib_indices.assign(rest.end() - static_cast<std::ptrdiff_t>(n_calib), rest.end());

    std::sort(fold.train_indices.begin(), fold.train_indices.end());
    std::sort(fold.calib_indices.begin(), fold.calib_indices.end());
    std::sort(fold.test_indices.begin(), fold.test_indices.end());
    begin = end;
  }
  return folds;
}

}  // namespace sfreject
