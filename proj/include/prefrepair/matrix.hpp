// Copyright 2026 The prefrepair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace prefrepair {

// Dense row-major matrix of doubles. Rows are contiguous so the SIMD kernels
// can stream over them directly.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Square boolean mask stored one byte per cell.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t n, bool value) : n_(n), cells_(n * n, value ? 1 : 0) {}

  std::size_t n() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value) { cells_[i * n_ + j] = value ? 1 : 0; }
  void set_pair(std::size_t i, std::size_t j, bool value) {
    set(i, j, value);
    set(j, i, value);
  }
  bool all() const;
  std::size_t count() const;

  bool operator==(const Mask&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<unsigned char> cells_;
};

double frobenius_norm(const DenseMatrix& a);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

// (A - A^T) / 2, in place. Square input only.
void skew_project(DenseMatrix& a);

}  // namespace prefrepair
