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

#include <cmath>
#include <cstddef>

#include "prefrepair/kernels.hpp"

namespace prefrepair::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void masked_sub_scalar(const double* a, const double* b, const double* w, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * (a[i] - b[i]);
}

std::size_t hard_threshold_scalar(const double* in, double threshold, double* out,
                                  std::size_t n) {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(in[i]) > threshold) {
      out[i] = in[i];
      ++kept;
    } else {
      out[i] = 0.0;
    }
  }
  return kept;
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",           dot_scalar,          axpy_scalar,
      sum_sq_scalar,      sum_sq_diff_scalar,  sub_scalar,
      masked_sub_scalar,  hard_threshold_scalar, scale_scalar,
  };
  return table;
}

}  // namespace prefrepair::kernels
