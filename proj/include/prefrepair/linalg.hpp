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
#include <cstdint>
#include <vector>

#include "prefrepair/matrix.hpp"

namespace prefrepair {

// Thin SVD. Singular vectors are stored one per row: left is k x rows(A),
// right is k x cols(A), so A ~= sum_c sigma_c * left.row(c) * right.row(c)^T.
struct SvdResult {
  std::vector<double> singular_values;  // descending
  DenseMatrix left;
  DenseMatrix right;
  std::size_t iterations = 0;
  bool converged = true;
};

// Full spectrum through Eigen's divide-and-conquer SVD.
SvdResult dense_svd(const DenseMatrix& a);
std::vector<double> singular_values(const DenseMatrix& a);

struct SubspaceOptions {
  std::size_t oversample = 4;
  std::size_t max_iters = 500;
  // Stop once ||A v_c - sigma_c u_c|| <= tol * sigma_1 for every kept c.
  double tol = 1e-13;
  std::uint64_t seed = 0x5eed;
};

// Leading k singular triplets by block subspace iteration with a
// Rayleigh-Ritz step. The block products run on the dispatched kernels.
// warm_start, when given, holds right vectors one per row and seeds the block.
SvdResult truncated_svd(const DenseMatrix& a, std::size_t k, const SubspaceOptions& options,
                        const DenseMatrix* warm_start = nullptr);

enum class SvdMethod { kAuto, kDense, kSubspace };

// Leading k triplets with the chosen method. kAuto uses the dense path up to
// dense_cutoff rows and subspace iteration beyond.
SvdResult leading_svd(const DenseMatrix& a, std::size_t k, SvdMethod method,
                      const SubspaceOptions& options, const DenseMatrix* warm_start = nullptr,
                      std::size_t dense_cutoff = 64);

// sum_{c<k} sigma_c u_c v_c^T
DenseMatrix reconstruct(const SvdResult& svd, std::size_t k);

// Orthonormalizes the rows of q in place (two-pass modified Gram-Schmidt).
// Rows that collapse are replaced by fresh random directions drawn from seed.
void orthonormalize_rows(DenseMatrix& q, std::uint64_t seed);

}  // namespace prefrepair
