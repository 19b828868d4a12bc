//
// Copyright 2026 The mplkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mplkit/dataset.h"
#include "mplkit/error.h"
#include "mplkit/file_util.h"

namespace mplkit {
namespace {

std::string DataFile(const std::string& name) { return std::string(MPLKIT_DATA_DIR) + "/" + name; }

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

CsvSchema SimpleSchema() {
  CsvSchema s;
  s.delimiter = ',';
  s.has_header = true;
  s.label_column = "label";
  s.categorical_columns = {"color"};
  return s;
}

TEST(CsvTest, NumericAndLabel) {
  CsvSchema s;
  s.label_column = "1";
  const LoadedCsv l = ParseCsv("0.5,yes\n-1.25,no\n", s);
  EXPECT_EQ(l.dataset.size(), 2u);
  EXPECT_EQ(l.dataset.feature_count(), 1u);
  EXPECT_EQ(l.dataset.class_count, 2u);
  EXPECT_EQ(l.dataset.class_labels, (std::vector<std::string>{"no", "yes"}));
  EXPECT_EQ(l.dataset.samples[0].x[0], 0.5);
  EXPECT_EQ(l.dataset.samples[0].y, 1u);
}

TEST(CsvTest, OneHotEncoding) {
  const LoadedCsv l =
      ParseCsv("size,color,label\n1,red,a\n2,green,b\n3,blue,a\n4,red,b\n", SimpleSchema());
  EXPECT_EQ(l.dataset.feature_names,
            (std::vector<std::string>{"size", "color=blue", "color=green", "color=red"}));
  EXPECT_EQ(l.dataset.samples[1].x, (std::vector<double>{2, 0, 1, 0}));
}

TEST(CsvTest, ErrorsCarryRowNumbers) {
  try {
    ParseCsv("size,color,label\n1,red,a\n2,green\n", SimpleSchema());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(CodeOf([] { ParseCsv("size,color,label\nx,red,a\n", SimpleSchema()); }),
            ErrorCode::kParse);
}

TEST(CsvTest, UnknownCategoryAtApplyTime) {
  const LoadedCsv fit = ParseCsv("size,color,label\n1,red,a\n2,blue,b\n", SimpleSchema());
  EXPECT_NO_THROW(ParseCsv("size,color,label\n5,blue,a\n", SimpleSchema(), &fit.encoding));
  EXPECT_EQ(CodeOf([&] {
              ParseCsv("size,color,label\n5,purple,a\n", SimpleSchema(), &fit.encoding);
            }),
            ErrorCode::kEncoding);
  EXPECT_EQ(CodeOf([&] {
              ParseCsv("size,color,label\n5,red,c\n", SimpleSchema(), &fit.encoding);
            }),
            ErrorCode::kEncoding);
}

TEST(CsvTest, IgnoredColumnsAndLabelOrder) {
  CsvSchema s = SimpleSchema();
  s.ignored_columns = {"id"};
  s.categorical_columns.clear();
  s.label_order = {"b", "a"};
  const LoadedCsv l = ParseCsv("id,size,label\n7,1,a\n8,2,b\n", s);
  EXPECT_EQ(l.dataset.feature_names, (std::vector<std::string>{"size"}));
  EXPECT_EQ(l.dataset.samples[0].y, 1u);
  s.label_order = {"a"};
  EXPECT_EQ(CodeOf([&] { ParseCsv("id,size,label\n7,1,a\n8,2,b\n", s); }),
            ErrorCode::kEncoding);
}

TEST(CsvTest, SchemaJsonRoundTrip) {
  CsvSchema s = SimpleSchema();
  s.label_order = {"x", "y"};
  const CsvSchema back = CsvSchema::FromJson(s.ToJson());
  EXPECT_EQ(back.delimiter, s.delimiter);
  EXPECT_EQ(back.has_header, s.has_header);
  EXPECT_EQ(back.label_column, s.label_column);
  EXPECT_EQ(back.categorical_columns, s.categorical_columns);
  EXPECT_EQ(back.label_order, s.label_order);
  EXPECT_EQ(CodeOf([] { CsvSchema::FromJson("{\"label\": "); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { CsvSchema::FromJson("{\"delimiter\": \";;\", \"label\": \"0\"}"); }),
            ErrorCode::kConfig);
}

TEST(CsvTest, WriteLoadRoundTrip) {
  const Dataset d = SyntheticGaussian(20, 3, 2.0, 5);
  const auto path = std::filesystem::temp_directory_path() / "mplkit_roundtrip.csv";
  WriteCsv(d, path.string());
  const LoadedCsv back = LoadCsv(path.string(), WrittenSchema(d));
  EXPECT_EQ(back.dataset.samples, d.samples);
  EXPECT_EQ(back.dataset.feature_names, d.feature_names);
  std::filesystem::remove(path);
}

TEST(GermanCreditTest, ShippedFileLoads) {
  const LoadedCsv l =
      LoadCsv(DataFile("german.data"), CsvSchema::Load(DataFile("german.schema.json")));
  const Dataset& d = l.dataset;
  EXPECT_EQ(d.size(), 1000u);
  EXPECT_EQ(d.class_count, 2u);
  EXPECT_EQ(d.class_labels, (std::vector<std::string>{"2", "1"}));
  EXPECT_EQ(d.feature_count(), 61u);
  std::size_t good = 0;
  for (const Sample& z : d.samples) good += z.y;
  EXPECT_EQ(good, 700u);
  EXPECT_NO_THROW(d.Validate());
}

TEST(GermanCreditTest, NumericVariantSchema) {
  std::string text;
  for (int row = 0; row < 4; ++row) {
    for (int c = 0; c < 24; ++c) text += std::to_string((row * 7 + c) % 5) + "   ";
    text += row % 2 ? "2\n" : "1\n";
  }
  const LoadedCsv l = ParseCsv(text, CsvSchema::Load(DataFile("german-numeric.schema.json")));
  EXPECT_EQ(l.dataset.feature_count(), 24u);
  EXPECT_EQ(l.dataset.samples[0].y, 1u);
  EXPECT_EQ(l.dataset.samples[1].y, 0u);
}

TEST(SplitTest, GermanSizes) {
  const Dataset d = SyntheticGaussian(500, 2, 1.0, 3);
  const DataSplit s = Split(d, SplitSpec{400, 300, 300, 42});
  EXPECT_EQ(s.train.size(), 400u);
  EXPECT_EQ(s.holdout.size(), 300u);
  EXPECT_EQ(s.test.size(), 300u);
  std::set<std::size_t> rows(s.train_rows.begin(), s.train_rows.end());
  rows.insert(s.holdout_rows.begin(), s.holdout_rows.end());
  rows.insert(s.test_rows.begin(), s.test_rows.end());
  EXPECT_EQ(rows.size(), 1000u);
  EXPECT_EQ(s.train.samples[5], d.samples[s.train_rows[5]]);
}

TEST(SplitTest, DeterministicAndSeedSensitive) {
  const Dataset d = SyntheticGaussian(100, 2, 1.0, 3);
  const DataSplit a = Split(d, SplitSpec{50, 50, 100, 1});
  const DataSplit b = Split(d, SplitSpec{50, 50, 100, 1});
  const DataSplit c = Split(d, SplitSpec{50, 50, 100, 2});
  EXPECT_EQ(a.train_rows, b.train_rows);
  EXPECT_EQ(a.test.samples, b.test.samples);
  EXPECT_NE(a.train_rows, c.train_rows);
}

TEST(SplitTest, DisjointForRandomSpecs) {
  std::mt19937_64 rng(10);
  const Dataset d = SyntheticGaussian(60, 1, 1.0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t tr = 1 + rng() % 60;
    const std::size_t ho = rng() % (120 - tr);
    const std::size_t te = rng() % (121 - tr - ho);
    const DataSplit s = Split(d, SplitSpec{tr, ho, te, rng()});
    std::vector<std::size_t> all = s.train_rows;
    all.insert(all.end(), s.holdout_rows.begin(), s.holdout_rows.end());
    all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    EXPECT_EQ(all.size(), tr + ho + te);
  }
  EXPECT_EQ(CodeOf([&] { Split(d, SplitSpec{100, 10, 11, 0}); }), ErrorCode::kConfig);
}

TEST(StandardizeTest, TrainStatisticsOnly) {
  Dataset train = SyntheticGaussian(50, 3, 4.0, 1);
  for (Sample& z : train.samples) z.x[2] = 7.0;
  Dataset other = SyntheticGaussian(50, 3, 4.0, 2);
  for (Sample& z : other.samples) z.x[1] += 5.0;
  const std::vector<Dataset> others = {other};
  const Standardized s = Standardize(train, others);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    double sq = 0.0;
    for (const Sample& z : s.train.samples) mean += z.x[j] / 100.0;
    for (const Sample& z : s.train.samples) sq += (z.x[j] - mean) * (z.x[j] - mean) / 100.0;
    EXPECT_NEAR(mean, 0.0, 1e-9);
    if (j < 2) EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-9);
  }
  EXPECT_EQ(s.scaler.stddev[2], 0.0);
  EXPECT_EQ(s.train.samples[0].x[2], 0.0);
  double other_mean = 0.0;
  for (const Sample& z : s.others[0].samples) other_mean += z.x[1] / 100.0;
  EXPECT_GT(other_mean, 2.0);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST(SyntheticTest, BayesRuleAccuracyMatchesClosedForm) {
  const Dataset d = SyntheticGaussian(20000, 2, 6.0, 9);
  std::size_t correct = 0;
  for (const Sample& z : d.samples) correct += (z.x[0] > 0) == (z.y == 1);
  const double bayes = 1.0 - NormalCdf(-3.0);
  const double acc = static_cast<double>(correct) / d.size();
  EXPECT_NEAR(acc, bayes, 5 * std::sqrt(bayes * (1 - bayes) / d.size()));
  EXPECT_GT(bayes, 0.95);
}

TEST(SyntheticTest, ZeroSeparationIsChance) {
  const Dataset d = SyntheticGaussian(500, 2, 0.0, 4);
  std::size_t correct = 0;
  for (const Sample& z : d.samples) correct += (z.x[0] > 0) == (z.y == 1);
  const double acc = static_cast<double>(correct) / d.size();
  EXPECT_GT(acc, 0.4);
  EXPECT_LT(acc, 0.6);
}

TEST(SyntheticTest, Deterministic) {
  EXPECT_EQ(SyntheticGaussian(10, 3, 1.0, 5).samples, SyntheticGaussian(10, 3, 1.0, 5).samples);
  EXPECT_NE(SyntheticGaussian(10, 3, 1.0, 5).samples, SyntheticGaussian(10, 3, 1.0, 6).samples);
}

}  // namespace
}  // namespace mplkit
