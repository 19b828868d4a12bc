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

#include "mplkit/matrix.h"

#include <cmath>
#include <string>
#include <utility>

#include "mplkit/error.h"

namespace mplkit {

Matrix2D::Matrix2D(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix2D::Matrix2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  Require(data_.size() == rows_ * cols_, ErrorCode::kShape,
          "matrix data length " + std::to_string(data_.size()) + " != " +
              std::to_string(rows_) + "x" + std::to_string(cols_));
}

bool Matrix2D::AllFinite() const { return mplkit::AllFinite(data_); }

void MultiplyAdd(ConstMatrixView w, std::span<const double> x, std::span<double> y) {
  Require(x.size() == w.cols && y.size() == w.rows, ErrorCode::kShape,
          "matrix-vector size mismatch");
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.data.data() + r * w.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

void TransposeMultiplyAdd(ConstMatrixView w, std::span<const double> y,
                          std::span<double> x) {
  Require(x.size() == w.cols && y.size() == w.rows, ErrorCode::kShape,
          "transposed matrix-vector size mismatch");
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.data.data() + r * w.cols;
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t c = 0; c < w.cols; ++c) x[c] += row[c] * yr;
  }
}

void AddOuter(std::span<const double> u, std::span<const double> v, MatrixView w) {
  Require(u.size() == w.rows && v.size() == w.cols, ErrorCode::kShape,
          "outer product size mismatch");
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double ur = u[r];
    if (ur == 0.0) continue;
    double* row = w.data.data() + r * w.cols;
    for (std::size_t c = 0; c < w.cols; ++c) row[c] += ur * v[c];
  }
}

bool AllFinite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace mplkit
