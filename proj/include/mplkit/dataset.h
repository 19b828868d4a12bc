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

#ifndef MPLKIT_DATASET_H_
#define MPLKIT_DATASET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mplkit/mlp.h"
#include "mplkit/random.h"

namespace mplkit {

struct Dataset {
  std::vector<Sample> samples;
  std::vector<std::string> feature_names;
  std::size_t class_count = 0;
  std::vector<std::string> class_labels;  // raw label of each class index
  std::string provenance;

  std::size_t size() const { return samples.size(); }
  std::size_t feature_count() const { return feature_names.size(); }

  // Throws a shape error for ragged features, an index error for labels
  // >= class_count and a numeric error for non-finite features.
  void Validate() const;
};

// Column roles of a delimited file. Columns are addressed by 0-based index or,
// when `column_names` is given, by name.
struct CsvSchema {
  char delimiter = ',';  // ' ' splits on runs of whitespace
  bool has_header = false;
  std::vector<std::string> column_names;  // optional; sets feature names
  std::string label_column;               // name or index
  std::vector<std::string> categorical_columns;
  std::vector<std::string> ignored_columns;
  // Raw label strings in class-index order. When empty, labels are numbered
  // in sorted order of their first appearance in the file.
  std::vector<std::string> label_order;

  // Parses the JSON schema format documented in data/README.md.
  static CsvSchema FromJson(const std::string& text);
  static CsvSchema Load(const std::string& path);
  std::string ToJson() const;
};

// Fitted category levels, reused to encode further files consistently.
struct CsvEncoding {
  std::vector<std::size_t> categorical_columns;
  std::vector<std::vector<std::string>> levels;  // per categorical column, sorted
  std::vector<std::string> class_labels;
  std::size_t column_count = 0;
};

struct LoadedCsv {
  Dataset dataset;
  CsvEncoding encoding;
};

// Parses delimited text: numerics as reals, categoricals one-hot encoded,
// labels mapped to 0-based class indices. With `fitted`, categories and labels
// unseen at fit time raise an encoding error. Malformed rows raise a parse
// error naming the 1-based line number.
LoadedCsv ParseCsv(const std::string& text, const CsvSchema& schema,
                   const CsvEncoding* fitted = nullptr);
LoadedCsv LoadCsv(const std::string& path, const CsvSchema& schema,
                  const CsvEncoding* fitted = nullptr);

// Writes encoded features plus the class index as the last column, with a
// header. WrittenSchema() reads the file back into identical samples.
std::string FormatCsv(const Dataset& dataset);
void WriteCsv(const Dataset& dataset, const std::string& path);
CsvSchema WrittenSchema(const Dataset& dataset);

struct SplitSpec {
  std::size_t train_count = 400;
  std::size_t holdout_count = 300;
  std::size_t test_count = 300;
  Seed seed = 0;
};

struct DataSplit {
  Dataset train;
  Dataset holdout;
  Dataset test;
  std::vector<std::size_t> train_rows;  // source row indices
  std::vector<std::size_t> holdout_rows;
  std::vector<std::size_t> test_rows;
};

// Seeded shuffle of row indices, then contiguous train/holdout/test blocks.
// Throws a config error if the counts exceed the dataset size.
DataSplit Split(const Dataset& dataset, const SplitSpec& spec);

struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std; 0 marks a constant feature

  Dataset Apply(const Dataset& data) const;
};

// Per-feature statistics of the training data only. Constant features are
// centered but not scaled.
Scaler FitScaler(const Dataset& train);

struct Standardized {
  Dataset train;
  std::vector<Dataset> others;
  Scaler scaler;
};

Standardized Standardize(const Dataset& train, std::span<const Dataset> others);

// Two isotropic unit-variance Gaussian clusters centred at -/+ (separation/2)
// along the first axis; class 0 is the negative cluster.
Dataset SyntheticGaussian(std::size_t n_per_class, std::size_t dim, double separation,
                          Seed seed);

}  // namespace mplkit

#endif  // MPLKIT_DATASET_H_
