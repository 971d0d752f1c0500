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

#include "prefrepair/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prefrepair/kernels.hpp"

namespace prefrepair {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool Mask::all() const {
  return std::all_of(cells_.begin(), cells_.end(), [](unsigned char c) { return c != 0; });
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(kernels::sum_sq(a.data(), a.size()));
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("subtract: shape mismatch");
  }
  DenseMatrix out(a.rows(), a.cols());
  kernels::sub(a.data(), b.data(), out.data(), a.size());
  return out;
}

void skew_project(DenseMatrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) - a(j, i));
      a(i, j) = v;
      a(j, i) = -v;
    }
  }
}

}  // namespace prefrepair
