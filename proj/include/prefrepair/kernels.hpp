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

// Data-parallel inner loops used by the solvers. Each entry has a scalar
// reference implementation; wider variants are selected once at startup from
// the CPU feature set and must agree with the reference to rounding.

#include <cstddef>
#include <string_view>

namespace prefrepair::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // out = a - b
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  // out = w * (a - b), w is a 0/1 weight vector
  void (*masked_sub)(const double* a, const double* b, const double* w, double* out,
                     std::size_t n);
  // out[i] = |in[i]| > threshold ? in[i] : 0; returns the number of survivors.
  std::size_t (*hard_threshold)(const double* in, double threshold, double* out,
                                std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
};

const KernelTable& scalar_table();

// Null when the build or the host lacks AVX2+FMA.
const KernelTable* avx2_table();

// The table every solver uses. Chosen on first call; PREFREPAIR_SIMD=scalar in
// the environment forces the reference path.
const KernelTable& active();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline double sum_sq(const double* a, std::size_t n) { return active().sum_sq(a, n); }
inline double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return active().sum_sq_diff(a, b, n);
}
inline void sub(const double* a, const double* b, double* out, std::size_t n) {
  active().sub(a, b, out, n);
}
inline void masked_sub(const double* a, const double* b, const double* w, double* out,
                       std::size_t n) {
  active().masked_sub(a, b, w, out, n);
}
inline std::size_t hard_threshold(const double* in, double threshold, double* out,
                                  std::size_t n) {
  return active().hard_threshold(in, threshold, out, n);
}
inline void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }

}  // namespace prefrepair::kernels
