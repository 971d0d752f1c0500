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
#include <optional>
#include <utility>
#include <vector>

#include "prefrepair/adversary.hpp"
#include "prefrepair/core.hpp"
#include "prefrepair/linalg.hpp"
#include "prefrepair/ranking.hpp"

namespace prefrepair {

struct SolverParams {
  std::size_t target_rank = 2;
  std::size_t max_iters = 2500;
  double tol = 1e-11;

  // Hard-threshold schedule for the sparse step at stage k, iteration t:
  //   zeta = beta * (sigma_{k+1} + decay^t * sigma_k)
  // computed on the current M - S. beta <= 0 selects the data-driven default
  // max_i ||U_i|| * max_j ||V_j|| from the rank-r singular vectors of M, which
  // bounds |L_ij| / sigma_1 for an incoherent low-rank part.
  double beta = 0.0;
  double decay = 0.5;
  // The threshold never drops below noise_floor times a robust scale of the
  // dense part of M - L, so sampling noise stays in the residual instead of
  // the sparse part. Use about 3 for sampled data; 0 (exact data) disables it.
  double noise_floor = 0.0;

  // Skew-symmetric inputs have paired singular values, so the rank stages
  // advance two at a time and L is re-projected onto skew matrices.
  bool skew = true;

  bool optspace_trim = true;

  // After the alternating stages, re-fit each item's low-rank coordinates by
  // consensus over its comparisons and resume the iterations if any item
  // gains agreeing entries. Skew inputs with even target rank only.
  bool consensus_repair = true;
  std::size_t consensus_samples = 512;  // random subsets per item when not exhaustive
  std::uint64_t seed = 0x5eed;

  // |S_ij| above this (logit units) counts as a detected corruption.
  double support_tol = 1e-6;

  SvdMethod svd_method = SvdMethod::kAuto;
  std::size_t dense_cutoff = 64;

  void validate() const;
};

struct RecoveryReport {
  LogitMatrix l_hat;
  SparseCorruption s_hat;
  std::vector<double> singular_values;  // spectrum of l_hat, descending
  std::size_t iterations_used = 0;
  std::size_t repair_moves = 0;  // items re-fitted by an accepted consensus repair
  double residual_frobenius = 0.0;  // ||M - L - S||_F at the returned iterate
  std::vector<std::pair<std::size_t, std::size_t>> detected_pairs;
  bool converged = false;
  double beta = 0.0;  // threshold multiplier actually used
  // ||M - L - S||_F after each S-step of the alternating stages.
  std::vector<double> residual_trace;
  // Same quantity for the restart after a consensus repair (empty if none ran).
  std::vector<double> repair_trace;
  std::vector<double> threshold_trace;
};

// Low-rank plus sparse split of a fully observed logit matrix by alternating
// projections: the S-step hard-thresholds M - L, the L-step projects M - S
// onto rank-k matrices, with k raised stagewise up to the target rank.
RecoveryReport rpca(const LogitMatrix& m, const SolverParams& params);

struct CompletionResult {
  LogitMatrix completed;  // fully observed, skew-projected
  std::size_t iterations = 0;
  bool converged = false;
  double observed_residual = 0.0;  // ||P_Omega(M - X S Y^T)||_F / ||P_Omega(M)||_F
};

// OptSpace-style completion: trim over-represented rows and columns, take the
// rank-r SVD of the rescaled observed matrix as a starting point, then run
// gradient descent over the rank-r factorization on the observed entries.
// Observed entries are returned unchanged; unobserved entries get the fit.
CompletionResult complete(const LogitMatrix& m, const SolverParams& params);

struct PipelineOptions {
  SolverParams solver;
  LinkId link = LinkId::kLogit;
  double clamp = 1e-6;
  // Append k uniformly weak synthetic items before recovery (0 = off).
  std::size_t augment_k = 0;
  double augment_upper = 0.731;
  double augment_lower = 0.269;
};

struct PipelineResult {
  Ranking ranking;
  PreferenceMatrix recovered;  // fully observed, same n as the input
  std::optional<RecoveryReport> report;
  std::optional<CompletionResult> completion;
};

// Empirical matrix -> link -> rpca -> inverse link -> Copeland.
PipelineResult roratron(const PreferenceMatrix& p_hat, const PipelineOptions& options);
PipelineResult roratron(const ComparisonDataset& data, const PipelineOptions& options);

// Empirical matrix -> link -> completion -> inverse link -> Copeland.
PipelineResult coratron(const PreferenceMatrix& p_hat, const PipelineOptions& options);
PipelineResult coratron(const ComparisonDataset& data, const PipelineOptions& options);

// Empirical matrix -> link -> completion -> rpca -> inverse link -> Copeland.
PipelineResult curatron(const PreferenceMatrix& p_hat, const PipelineOptions& options);
PipelineResult curatron(const ComparisonDataset& data, const PipelineOptions& options);

// (n+k) x (n+k) matrix: the original block is kept with its mask, every
// original item beats every new one with probability `upper` (new vs old is
// `lower`), and new items tie each other.
PreferenceMatrix augment(const PreferenceMatrix& p, std::size_t k, double upper = 0.731,
                         double lower = 0.269);

// Leading n x n block.
PreferenceMatrix crop(const PreferenceMatrix& p, std::size_t n);

struct HealthCheck {
  std::size_t effective_rank = 0;
  std::vector<double> spectrum;
  bool flagged = false;
};

// Spectrum of the link-transformed matrix; effective rank counts
// sigma_k > tau_rel * sigma_1, flagged when it exceeds the target rank.
HealthCheck health_check(const PreferenceMatrix& p, const SolverParams& params,
                         double tau_rel = 1e-3, LinkId link = LinkId::kLogit,
                         double clamp = 1e-6);

}  // namespace prefrepair
