#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sfreject/dataset.hpp"
#include "sfreject/error.hpp"
#include "test_support.hpp"

using namespace sfreject;
using namespace sfreject::testing;

namespace {

std::filesystem::path csv(const std::string& name, const std::string& text) {
  return write_file(temp_dir("csv_" + name) / "data.csv", text);
}

}  // namespace

TEST(LoadCsv, ImputesMissingCellWithColumnMean) {
  const auto p = csv("impute", "age,bmi,label\n1,20,A\n2,,B\n3,30,A\n");
  const Dataset d = load_csv(p, "label", true);
  ASSERT_EQ(d.n_samples(), 3u);
  ASSERT_EQ(d.n_features(), 2u);
  // oracle: mean of the non-missing cells
  const double expected = (20.0 + 30.0) / 2.0;
  EXPECT_DOUBLE_EQ(d.at(1, 1), expected);
  EXPECT_EQ(d.at(0, 1), 20.0);
  EXPECT_EQ(d.at(2, 1), 30.0);
}

TEST(LoadCsv, MissingCellWithoutImputationIsParseErrorNamingRowAndColumn) {
  const auto p = csv("missing", "age,bmi,label\n1,20,A\n2,,B\n3,30,A\n");
  try {
    load_csv(p, "label", false);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row"), std::string::npos) << msg;
    EXPECT_NE(msg.find("bmi"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, NoMissingCellsReadsMatrixVerbatim) {
  const auto p = csv("plain", "a,b,label\n1.5,-2,x\n0.25,1e3,y\n");
  const Dataset d = load_csv(p, "label", false);
  const std::vector<double> expected{1.5, -2.0, 0.25, 1000.0};
  EXPECT_EQ(d.features(), expected);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCsv, LabelsEncodedByFirstAppearance) {
  const auto p = csv("labels", "label,v\nA,1\nB,2\nA,3\n");
  const Dataset d = load_csv(p, "label");
  // oracle: enumerate distinct labels in order of first appearance
  const std::vector<std::string> raw{"A", "B", "A"};
  std::vector<std::string> seen;
  std::vector<int> expected;
  for (const auto& s : raw) {
    auto it = std::find(seen.begin(), seen.end(), s);
    if (it == seen.end()) {
      seen.push_back(s);
      it = seen.end() - 1;
    }
    expected.push_back(static_cast<int>(it - seen.begin()));
  }
  EXPECT_EQ(d.labels(), expected);
  EXPECT_EQ(d.class_names(), seen);
  EXPECT_EQ(d.at(2, 0), 3.0);
}

TEST(LoadCsv, ImputationLeavesObservedCellsBitIdentical) {
  const auto p = csv("bits", "a,b,label\n0.1,0.7,A\n,0.30000000000000004,B\n0.3,,A\n");
  const Dataset d = load_csv(p, "label", true);
  EXPECT_EQ(d.at(0, 0), 0.1);
  EXPECT_EQ(d.at(2, 0), 0.3);
  EXPECT_EQ(d.at(0, 1), 0.7);
  EXPECT_EQ(d.at(1, 1), 0.30000000000000004);
}

TEST(LoadCsv, AllMissingColumnIsUnusable) {
  const auto p = csv("unusable", "a,b,label\n1,,A\n2,,B\n");
  EXPECT_THROW(load_csv(p, "label", true), UnusableFeatureError);
}

TEST(LoadCsv, MalformedInputs) {
  EXPECT_THROW(load_csv(csv("nolabel", "a,b\n1,2\n"), "label"), ParseError);
  EXPECT_THROW(load_csv(csv("text", "a,label\nabc,A\n"), "label"), ParseError);
  EXPECT_THROW(load_csv(csv("ragged", "a,b,label\n1,2,A\n1,A\n"), "label"), ParseError);
  EXPECT_THROW(load_csv("/nonexistent/file.csv", "label"), ParseError);
}

TEST(Dataset, RejectsInvalidShapes) {
  EXPECT_THROW(Dataset({1, 2}, 1, {0, 2}, {"a"}, {"x", "y"}), ConfigError);
  EXPECT_THROW(Dataset({1, 2}, 1, {0, 0}, {"a"}, {"x"}), ConfigError);
  EXPECT_THROW(Dataset({1, 2, 3}, 1, {0, 1}, {"a"}, {"x", "y"}), ConfigError);
}

TEST(Standardizer, PopulationMeanAndStd) {
  const Dataset d = make_dataset({{1.0}, {3.0}}, {0, 1});
  const Standardizer s = fit_standardizer(d, {0, 1});
  EXPECT_DOUBLE_EQ(s.means()[0], 2.0);
  EXPECT_DOUBLE_EQ(s.std_devs()[0], 1.0);
}

TEST(Standardizer, ConstantFeatureGetsUnitStd) {
  const Dataset d = make_dataset({{5.0, 1.0}, {5.0, 2.0}, {5.0, 4.0}}, {0, 1, 0});
  const Standardizer s = fit_standardizer(d, {0, 1, 2});
  EXPECT_DOUBLE_EQ(s.means()[0], 5.0);
  EXPECT_DOUBLE_EQ(s.std_devs()[0], 1.0);
  // oracle for the non-constant column
  const double m = 7.0 / 3.0;
  const double var = ((1 - m) * (1 - m) + (2 - m) * (2 - m) + (4 - m) * (4 - m)) / 3.0;
  EXPECT_NEAR(s.std_devs()[1], std::sqrt(var), 1e-15);
}

TEST(Standardizer, StandardizedColumnIsFixedPoint) {
  const Dataset d = make_dataset({{-1.0}, {1.0}, {-1.0}, {1.0}}, {0, 1, 0, 1});
  const Standardizer s = fit_standardizer(d, {0, 1, 2, 3});
  for (double v : {-1.0, 0.3, 2.5}) {
    EXPECT_NEAR(s.transform(std::vector<double>{v})[0], v, 1e-9);
  }
}

TEST(Standardizer, UsesOnlyGivenRows) {
  const Dataset d = make_dataset({{0.0}, {2.0}, {100.0}}, {0, 1, 0});
  const Standardizer s = fit_standardizer(d, {0, 1});
  EXPECT_DOUBLE_EQ(s.means()[0], 1.0);
}

TEST(StandardizerProperty, RoundTripWithinRelativeTolerance) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    const std::size_t d = 1 + trial % 6;
    std::vector<double> sc(d);
    for (auto& v : sc) v = scale(rng);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> r(d);
      for (std::size_t j = 0; j < d; ++j) r[j] = sc[j] * n(rng) + sc[j];
      rows.push_back(r);
      labels.push_back(i % 2);
    }
    const Dataset data = make_dataset(rows, labels);
    const Standardizer s = fit_standardizer(data, iota_rows(0, 20));
    for (const auto& r : rows) {
      const Vector back = s.inverse_transform(s.transform(r));
      for (std::size_t j = 0; j < d; ++j) {
        EXPECT_LE(std::abs(back[j] - r[j]), 1e-9 * std::max(1.0, std::abs(r[j])));
      }
    }
  }
}

TEST(Standardizer, DeltaConversionScalesByStd) {
  const Standardizer s({10.0, -1.0}, {2.0, 0.5});
  const Vector dz = s.inverse_transform_delta(std::vector<double>{1.0, -4.0});
  EXPECT_DOUBLE_EQ(dz[0], 2.0);
  EXPECT_DOUBLE_EQ(dz[1], -2.0);
  EXPECT_THROW(s.transform(std::vector<double>{1.0}), DimensionError);
}

TEST(SplitFolds, TenRowsFiveFolds) {
  const auto folds = split_folds(10, 5, 0.3, 42);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<std::size_t> all;
  for (const auto& f : folds) {
    EXPECT_EQ(f.test_indices.size(), 2u);
    all.insert(f.test_indices.begin(), f.test_indices.end());
  }
  EXPECT_EQ(all.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all.count(i), 1u);
}

TEST(SplitFolds, SameSeedSameSplits) {
  const auto a = split_folds(50, 5, 0.3, 7);
  const auto b = split_folds(50, 5, 0.3, 7);
  const auto c = split_folds(50, 5, 0.3, 8);
  bool differs = false;
  for (std::size_t f = 0; f < a.size(); ++f) {
    EXPECT_EQ(a[f].train_indices, b[f].train_indices);
    EXPECT_EQ(a[f].calib_indices, b[f].calib_indices);
    EXPECT_EQ(a[f].test_indices, b[f].test_indices);
    differs = differs || a[f].test_indices != c[f].test_indices;
  }
  EXPECT_TRUE(differs);
}

TEST(SplitFolds, WineSizedPartition) {
  const std::size_t n = 178;
  const auto folds = split_folds(n, 5, 0.3, 0);
  for (const auto& f : folds) {
    // integer-partition oracle
    const std::size_t rest = n - f.test_indices.size();
    EXPECT_TRUE(f.test_indices.size() == 35 || f.test_indices.size() == 36);
    EXPECT_EQ(f.calib_indices.size(), static_cast<std::size_t>(std::lround(0.3 * rest)));
    EXPECT_GE(f.calib_indices.size(), 42u);
    EXPECT_LE(f.calib_indices.size(), 43u);
  }
}

TEST(SplitFoldsProperty, PartitionIsDisjointAndComplete) {
  for (std::size_t n : {12u, 37u, 101u}) {
    for (std::size_t k : {2u, 3u, 5u}) {
      const auto folds = split_folds(n, k, 0.25, n * 31 + k);
      std::vector<int> test_hits(n, 0);
      for (const auto& f : folds) {
        std::vector<int> hits(n, 0);
        for (auto i : f.train_indices) ++hits[i];
        for (auto i : f.calib_indices) ++hits[i];
        for (auto i : f.test_indices) {
          ++hits[i];
          ++test_hits[i];
        }
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(hits[i], 1);
        EXPECT_FALSE(f.calib_indices.empty());
      }
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(test_hits[i], 1);
    }
  }
}

TEST(SplitFolds, TooSmallIsConfigError) {
  EXPECT_THROW(split_folds(4, 2, 0.1, 0), ConfigError);
  EXPECT_THROW(split_folds(10, 1, 0.3, 0), ConfigError);
  EXPECT_THROW(split_folds(3, 5, 0.3, 0), ConfigError);
}
