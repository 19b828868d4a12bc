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

#include "mplkit/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

#include "mplkit/error.h"
#include "mplkit/file_util.h"
#include "mplkit/text_util.h"

namespace mplkit {
namespace {

using nlohmann::json;

std::size_t ResolveColumn(const std::string& ref, const std::vector<std::string>& names,
                          std::size_t column_count) {
  const auto it = std::find(names.begin(), names.end(), ref);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  long long index = -1;
  try {
    index = ParseInt(ref);
  } catch (const Error&) {
    Fail(ErrorCode::kConfig, "unknown column '" + ref + "'");
  }
  Require(index >= 0 && static_cast<std::size_t>(index) < column_count, ErrorCode::kConfig,
          "column index " + ref + " out of range");
  return static_cast<std::size_t>(index);
}

std::vector<std::string> StringList(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const json& v : j.at(key)) {
    out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return out;
}

}  // namespace

void Dataset::Validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Require(samples[i].x.size() == feature_names.size(), ErrorCode::kShape,
            "sample " + std::to_string(i) + " has " + std::to_string(samples[i].x.size()) +
                " features, expected " + std::to_string(feature_names.size()));
    Require(samples[i].y < class_count, ErrorCode::kIndex,
            "sample " + std::to_string(i) + " label out of range");
    Require(AllFinite(samples[i].x), ErrorCode::kNumeric,
            "sample " + std::to_string(i) + " has non-finite features");
  }
}

CsvSchema CsvSchema::FromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("schema is not valid JSON: ") + e.what());
  }
  CsvSchema s;
  try {
    const std::string delim = j.value("delimiter", std::string(","));
    Require(delim.size() == 1 || delim == "whitespace", ErrorCode::kConfig,
            "delimiter must be a single character or \"whitespace\"");
    s.delimiter = delim == "whitespace" ? ' ' : delim[0];
    s.has_header = j.value("header", false);
    s.column_names = StringList(j, "columns");
    Require(j.contains("label"), ErrorCode::kConfig, "schema needs a \"label\" column");
    s.label_column = j.at("label").is_string() ? j.at("label").get<std::string>()
                                               : j.at("label").dump();
    s.categorical_columns = StringList(j, "categorical");
    s.ignored_columns = StringList(j, "ignore");
    s.label_order = StringList(j, "label_order");
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad schema field: ") + e.what());
  }
  return s;
}

CsvSchema CsvSchema::Load(const std::string& path) { return FromJson(ReadFile(path)); }

std::string CsvSchema::ToJson() const {
  json j;
  j["delimiter"] = delimiter == ' ' ? std::string("whitespace") : std::string(1, delimiter);
  j["header"] = has_header;
  if (!column_names.empty()) j["columns"] = column_names;
  j["label"] = label_column;
  j["categorical"] = categorical_columns;
  if (!ignored_columns.empty()) j["ignore"] = ignored_columns;
  if (!label_order.empty()) j["label_order"] = label_order;
  return j.dump(2);
}

LoadedCsv ParseCsv(const std::string& text, const CsvSchema& schema,
                   const CsvEncoding* fitted) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> header;
  const auto lines = SplitLines(text);
  bool header_pending = schema.has_header;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto fields = SplitFields(lines[i], schema.delimiter);
    for (auto& f : fields) f = Trim(f);
    if (header_pending) {
      header = std::move(fields);
      header_pending = false;
      continue;
    }
    rows.push_back(std::move(fields));
    line_numbers.push_back(i + 1);
  }

  std::vector<std::string> names = schema.column_names.empty() ? header : schema.column_names;
  std::size_t column_count = !names.empty() ? names.size()
                             : !rows.empty() ? rows.front().size()
                                             : 0;
  if (fitted != nullptr) {
    Require(fitted->column_count == column_count || rows.empty(), ErrorCode::kParse,
            "file has " + std::to_string(column_count) + " columns, encoding expects " +
                std::to_string(fitted->column_count));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Require(rows[r].size() == column_count, ErrorCode::kParse,
            "line " + std::to_string(line_numbers[r]) + ": expected " +
                std::to_string(column_count) + " columns, found " +
                std::to_string(rows[r].size()));
  }
  if (names.empty()) {
    for (std::size_t c = 0; c < column_count; ++c) names.push_back("c" + std::to_string(c));
  }

  const std::size_t label_col = ResolveColumn(schema.label_column, names, column_count);
  std::vector<bool> categorical(column_count, false);
  std::vector<bool> ignored(column_count, false);
  for (const auto& ref : schema.categorical_columns) {
    categorical[ResolveColumn(ref, names, column_count)] = true;
  }
  for (const auto& ref : schema.ignored_columns) {
    ignored[ResolveColumn(ref, names, column_count)] = true;
  }

  LoadedCsv out;
  CsvEncoding& enc = out.encoding;
  if (fitted != nullptr) {
    enc = *fitted;
  } else {
    enc.column_count = column_count;
    for (std::size_t c = 0; c < column_count; ++c) {
      if (!categorical[c] || ignored[c] || c == label_col) continue;
      std::set<std::string> levels;
      for (const auto& row : rows) levels.insert(row[c]);
      enc.categorical_columns.push_back(c);
      enc.levels.emplace_back(levels.begin(), levels.end());
    }
    if (!schema.label_order.empty()) {
      enc.class_labels = schema.label_order;
    } else {
      std::set<std::string> labels;
      for (const auto& row : rows) labels.insert(row[label_col]);
      enc.class_labels.assign(labels.begin(), labels.end());
    }
  }

  std::map<std::size_t, std::size_t> cat_slot;
  for (std::size_t k = 0; k < enc.categorical_columns.size(); ++k) {
    cat_slot[enc.categorical_columns[k]] = k;
  }

  Dataset& ds = out.dataset;
  for (std::size_t c = 0; c < column_count; ++c) {
    if (ignored[c] || c == label_col) continue;
    if (auto it = cat_slot.find(c); it != cat_slot.end()) {
      for (const auto& level : enc.levels[it->second]) {
        ds.feature_names.push_back(names[c] + "=" + level);
      }
    } else {
      ds.feature_names.push_back(names[c]);
    }
  }
  ds.class_labels = enc.class_labels;
  ds.class_count = enc.class_labels.size();

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(line_numbers[r]);
    Sample z;
    z.x.reserve(ds.feature_names.size());
    for (std::size_t c = 0; c < column_count; ++c) {
      if (ignored[c] || c == label_col) continue;
      if (auto it = cat_slot.find(c); it != cat_slot.end()) {
        const auto& levels = enc.levels[it->second];
        const auto pos = std::find(levels.begin(), levels.end(), row[c]);
        Require(pos != levels.end(), ErrorCode::kEncoding,
                where + ": unknown category '" + row[c] + "' in column " + names[c]);
        for (std::size_t k = 0; k < levels.size(); ++k) {
          z.x.push_back(levels.begin() + static_cast<std::ptrdiff_t>(k) == pos ? 1.0 : 0.0);
        }
      } else {
        try {
          z.x.push_back(ParseDouble(row[c]));
        } catch (const Error& e) {
          Fail(ErrorCode::kParse, where + ", column " + names[c] + ": " + e.what());
        }
      }
    }
    const auto label_pos =
        std::find(enc.class_labels.begin(), enc.class_labels.end(), row[label_col]);
    Require(label_pos != enc.class_labels.end(), ErrorCode::kEncoding,
            where + ": unknown label '" + row[label_col] + "'");
    z.y = static_cast<std::size_t>(label_pos - enc.class_labels.begin());
    ds.samples.push_back(std::move(z));
  }
  Require(ds.class_count >= 2 || ds.samples.empty(), ErrorCode::kInput,
          "dataset needs at least two classes");
  ds.Validate();
  return out;
}

LoadedCsv LoadCsv(const std::string& path, const CsvSchema& schema,
                  const CsvEncoding* fitted) {
  LoadedCsv loaded = ParseCsv(ReadFile(path), schema, fitted);
  loaded.dataset.provenance = path;
  return loaded;
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  for (const auto& name : dataset.feature_names) out += name + ",";
  out += "label\n";
  for (const Sample& z : dataset.samples) {
    for (double v : z.x) out += FormatDouble(v) + ",";
    out += std::to_string(z.y) + "\n";
  }
  return out;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  WriteFileAtomic(path, FormatCsv(dataset));
}

CsvSchema WrittenSchema(const Dataset& dataset) {
  CsvSchema s;
  s.delimiter = ',';
  s.has_header = true;
  s.label_column = "label";
  for (std::size_t k = 0; k < dataset.class_count; ++k) {
    s.label_order.push_back(std::to_string(k));
  }
  return s;
}

DataSplit Split(const Dataset& dataset, const SplitSpec& spec) {
  const std::size_t needed = spec.train_count + spec.holdout_count + spec.test_count;
  Require(needed <= dataset.size(), ErrorCode::kConfig,
          "split needs " + std::to_string(needed) + " rows, dataset has " +
              std::to_string(dataset.size()));
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  DataSplit split;
  auto take = [&](std::size_t begin, std::size_t count, Dataset& part,
                  std::vector<std::size_t>& rows) {
    part.feature_names = dataset.feature_names;
    part.class_count = dataset.class_count;
    part.class_labels = dataset.class_labels;
    part.provenance = dataset.provenance;
    rows.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                order.begin() + static_cast<std::ptrdiff_t>(begin + count));
    for (std::size_t r : rows) part.samples.push_back(dataset.samples[r]);
  };
  take(0, spec.train_count, split.train, split.train_rows);
  take(spec.train_count, spec.holdout_count, split.holdout, split.holdout_rows);
  take(spec.train_count + spec.holdout_count, spec.test_count, split.test, split.test_rows);
  return split;
}

Scaler FitScaler(const Dataset& train) {
  Require(!train.samples.empty(), ErrorCode::kInput, "cannot standardize an empty set");
  const std::size_t d = train.samples.front().x.size();
  const double n = static_cast<double>(train.size());
  Scaler s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const Sample& z : train.samples) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += z.x[j];
  }
  for (double& m : s.mean) m /= n;
  for (const Sample& z : train.samples) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = z.x[j] - s.mean[j];
      s.stddev[j] += c * c;
    }
  }
  for (double& v : s.stddev) v = std::sqrt(v / n);
  return s;
}

Dataset Scaler::Apply(const Dataset& data) const {
  Dataset out = data;
  for (Sample& z : out.samples) {
    Require(z.x.size() == mean.size(), ErrorCode::kShape, "feature count mismatch");
    for (std::size_t j = 0; j < z.x.size(); ++j) {
      z.x[j] -= mean[j];
      if (stddev[j] > 0.0) z.x[j] /= stddev[j];
    }
  }
  return out;
}

Standardized Standardize(const Dataset& train, std::span<const Dataset> others) {
  Standardized out;
  out.scaler = FitScaler(train);
  out.train = out.scaler.Apply(train);
  for (const Dataset& d : others) out.others.push_back(out.scaler.Apply(d));
  return out;
}

Dataset SyntheticGaussian(std::size_t n_per_class, std::size_t dim, double separation,
                          Seed seed) {
  Require(n_per_class >= 1 && dim >= 1, ErrorCode::kConfig,
          "synthetic data needs n >= 1 and dim >= 1");
  Dataset ds;
  ds.class_count = 2;
  ds.class_labels = {"0", "1"};
  ds.provenance = "synthetic_gaussian";
  for (std::size_t j = 0; j < dim; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  Rng rng = MakeRng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const double centre = (cls == 0 ? -0.5 : 0.5) * separation;
    for (std::size_t i = 0; i < n_per_class; ++i) {
      Sample z;
      z.y = cls;
      z.x.resize(dim);
      for (std::size_t j = 0; j < dim; ++j) z.x[j] = normal(rng) + (j == 0 ? centre : 0.0);
      ds.samples.push_back(std::move(z));
    }
  }
  return ds;
}

}  // namespace mplkit
