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

#ifndef MPLKIT_MATRIX_H_
#define MPLKIT_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mplkit {

// Non-owning row-major view over a block of a parameter vector.
template <typename T>
struct BasicMatrixView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<T> data;

  T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<T> row(std::size_t r) const { return data.subspan(r * cols, cols); }
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

// Dense row-major matrix of finite reals.
class Matrix2D {
 public:
  Matrix2D() = default;
  Matrix2D(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws a shape error when data.size() != rows * cols.
  Matrix2D(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  MatrixView view() { return {rows_, cols_, data_}; }
  ConstMatrixView view() const { return {rows_, cols_, data_}; }

  bool AllFinite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y += W x
void MultiplyAdd(ConstMatrixView w, std::span<const double> x, std::span<double> y);

// x += W^T y
void TransposeMultiplyAdd(ConstMatrixView w, std::span<const double> y,
                          std::span<double> x);

// W += u v^T
void AddOuter(std::span<const double> u, std::span<const double> v, MatrixView w);

bool AllFinite(std::span<const double> values);

}  // namespace mplkit

#endif  // MPLKIT_MATRIX_H_
