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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "prefrepair/error.hpp"
#include "prefrepair/kernels.hpp"
#include "prefrepair/recovery.hpp"

namespace prefrepair {
namespace {

std::vector<std::size_t> rank_stages(const SolverParams& params, std::size_t n) {
  std::vector<std::size_t> stages;
  const std::size_t r = std::min(params.target_rank, n);
  const std::size_t step = params.skew ? 2 : 1;
  for (std::size_t k = step; k < r; k += step) stages.push_back(k);
  stages.push_back(r);
  return stages;
}

// max_i ||U_i|| * max_j ||V_j|| over the rank-r singular vectors.
double incoherence_beta(const SvdResult& svd, std::size_t r) {
  const std::size_t n = svd.left.cols();
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lu = 0.0;
    double rv = 0.0;
    for (std::size_t c = 0; c < r && c < svd.left.rows(); ++c) {
      lu += svd.left(c, i) * svd.left(c, i);
      rv += svd.right(c, i) * svd.right(c, i);
    }
    left = std::max(left, lu);
    right = std::max(right, rv);
  }
  return std::sqrt(left * right);
}

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Writes low = Z C Z^T with C skew, so low_ij = z_i^T C z_j is linear in z_i.
// Each item's z_i is re-fitted to the subset of its row that agrees within
// tau; a move is kept only when it strictly grows that agreeing set.
std::size_t consensus_repair(const DenseMatrix& m, DenseMatrix& low, std::size_t r, double tau,
                             const SolverParams& params) {
  const std::size_t n = m.rows();
  const auto ni = static_cast<Eigen::Index>(n);
  const auto ri = static_cast<Eigen::Index>(r);
  if (n <= r + 1) return 0;
  const SvdResult svd = dense_svd(low);
  MatrixXd z(ni, ri);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index c = 0; c < ri; ++c) {
      z(i, c) = svd.left(static_cast<std::size_t>(c), static_cast<std::size_t>(i));
    }
  }
  MatrixXd lm(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      lm(i, j) = low(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  MatrixXd core = z.transpose() * lm * z;
  core = 0.5 * (core - core.transpose()).eval();
  MatrixXd g = z * core.transpose();  // row j holds (C z_j)^T

  Rng rng(params.seed);
  const bool exhaustive = r == 2 && (n - 1) * (n - 2) / 2 <= params.consensus_samples;
  std::vector<Eigen::Index> subset(r);
  std::size_t moves = 0;

  auto agreeing = [&](Eigen::Index i, const VectorXd& zi) {
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < ni; ++j) {
      if (j == i) continue;
      const double fit = g.row(j).dot(zi);
      if (std::fabs(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - fit) <= tau) ++count;
    }
    return count;
  };

  for (int sweep = 0; sweep < 10; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < ni; ++i) {
      const VectorXd current = z.row(i).transpose();
      const std::size_t have = agreeing(i, current);
      if (have + 1 >= n) continue;
      std::size_t best = have;
      VectorXd best_z = current;
      auto try_subset = [&]() {
        MatrixXd a(ri, ri);
        VectorXd b(ri);
        for (Eigen::Index c = 0; c < ri; ++c) {
          a.row(c) = g.row(subset[static_cast<std::size_t>(c)]);
          b(c) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(subset[static_cast<std::size_t>(c)]));
        }
        Eigen::FullPivLU<MatrixXd> lu(a);
        if (lu.rank() < ri) return;
        const VectorXd cand = lu.solve(b);
        const std::size_t count = agreeing(i, cand);
        if (count > best) {
          best = count;
          best_z = cand;
        }
      };
      if (exhaustive) {
        for (Eigen::Index j = 0; j < ni; ++j) {
          for (Eigen::Index k = j + 1; k < ni; ++k) {
            if (j == i || k == i) continue;
            subset[0] = j;
            subset[1] = k;
            try_subset();
          }
        }
      } else {
        for (std::size_t s = 0; s < params.consensus_samples; ++s) {
          for (std::size_t c = 0; c < r; ++c) {
            Eigen::Index pick;
            bool fresh;
            do {
              pick = static_cast<Eigen::Index>(uniform_index(rng, n));
              fresh = pick != i && std::find(subset.begin(), subset.begin() + static_cast<std::ptrdiff_t>(c), pick) ==
                                       subset.begin() + static_cast<std::ptrdiff_t>(c);
            } while (!fresh);
            subset[c] = pick;
          }
          try_subset();
        }
      }
      if (best <= have || best < r + 1) continue;
      // Least-squares fit on the agreeing entries of the winning candidate.
      MatrixXd normal = MatrixXd::Zero(ri, ri);
      VectorXd rhs = VectorXd::Zero(ri);
      for (Eigen::Index j = 0; j < ni; ++j) {
        if (j == i) continue;
        const double mij = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (std::fabs(mij - g.row(j).dot(best_z)) > tau) continue;
        normal.noalias() += g.row(j).transpose() * g.row(j);
        rhs.noalias() += g.row(j).transpose() * mij;
      }
      const VectorXd refined = normal.ldlt().solve(rhs);
      z.row(i) = (refined.allFinite() && agreeing(i, refined) >= best ? refined : best_z).transpose();
      g.row(i) = (core * z.row(i).transpose()).transpose();
      changed = true;
      ++moves;
    }
    if (!changed) break;
  }
  if (moves == 0) return 0;
  const MatrixXd rebuilt = z * core * z.transpose();
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      low(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = rebuilt(i, j);
    }
  }
  skew_project(low);
  return moves;
}

}  // namespace

void SolverParams::validate() const {
  if (target_rank == 0) throw ValidationError("target_rank must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
  if (max_iters == 0) throw ValidationError("max_iters must be positive");
  if (!(decay > 0.0 && decay < 1.0)) throw ValidationError("decay must lie in (0,1)");
  if (!(support_tol >= 0.0)) throw ValidationError("support_tol must be non-negative");
  if (!(noise_floor >= 0.0)) throw ValidationError("noise_floor must be non-negative");
  if (consensus_repair && consensus_samples == 0) {
    throw ValidationError("consensus_samples must be positive");
  }
}

namespace {

RecoveryReport rpca_once(const LogitMatrix& m, const SolverParams& params) {
  if (!m.mask.all()) throw ValidationError("rpca needs a fully observed matrix; complete it first");
  const std::size_t n = m.n();
  for (double v : m.values.values()) {
    if (!std::isfinite(v)) throw ValidationError("rpca input has non-finite entries");
  }

  RecoveryReport report;
  report.l_hat = LogitMatrix{DenseMatrix(n, n), Mask(n, true), m.link};
  report.s_hat = SparseCorruption{n, {}, CorruptionSpace::kLogit};
  const double m_norm = frobenius_norm(m.values);
  if (m_norm == 0.0 || n < 2) {
    report.converged = true;
    report.beta = params.beta;
    report.singular_values.assign(n, 0.0);
    return report;
  }

  SubspaceOptions svd_options;
  svd_options.seed = params.seed;
  auto leading = [&](const DenseMatrix& a, std::size_t k, const DenseMatrix* warm) {
    return leading_svd(a, k, params.svd_method, svd_options, warm, params.dense_cutoff);
  };

  const std::size_t r = std::min(params.target_rank, n);
  const std::size_t cells = n * n;
  DenseMatrix low(n, n);
  DenseMatrix sparse(n, n);
  DenseMatrix scratch(n, n);
  DenseMatrix previous_low(n, n);

  double beta = params.beta;
  {
    const SvdResult top = leading(m.values, r, nullptr);
    if (!(beta > 0.0)) beta = incoherence_beta(top, r);
    const double zeta = beta * top.singular_values[0];
    kernels::hard_threshold(m.values.data(), zeta, sparse.data(), cells);
    for (std::size_t i = 0; i < n; ++i) sparse(i, i) = 0.0;
    report.threshold_trace.push_back(zeta);
  }
  report.beta = beta;

  DenseMatrix warm;
  bool have_warm = false;
  std::size_t iteration = 0;
  bool exhausted = false;
  double residual = m_norm;

  // Dense-noise scale of M - L from the lower quartile of |M_ij - L_ij| off the
  // diagonal (for Gaussian noise the quartile sits at 0.3186 sigma), which
  // stays on clean entries while up to 3/4 of them are corrupted.
  std::vector<double> magnitudes;
  magnitudes.reserve(cells);
  auto noise_floor = [&]() {
    if (!(params.noise_floor > 0.0) || n < 2) return 0.0;
    magnitudes.clear();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) magnitudes.push_back(std::fabs(scratch(i, j)));
      }
    }
    auto quartile = magnitudes.begin() + static_cast<std::ptrdiff_t>(magnitudes.size() / 4);
    std::nth_element(magnitudes.begin(), quartile, magnitudes.end());
    return params.noise_floor * (*quartile / 0.3186);
  };

  // S-step on the current L; returns ||M - L - S||_F.
  auto sparse_step = [&](double zeta) {
    kernels::sub(m.values.data(), low.data(), scratch.data(), cells);  // M - L
    zeta = std::max(zeta, noise_floor());
    report.threshold_trace.push_back(zeta);
    kernels::hard_threshold(scratch.data(), zeta, sparse.data(), cells);
    for (std::size_t i = 0; i < n; ++i) sparse(i, i) = 0.0;
    return std::sqrt(kernels::sum_sq_diff(scratch.data(), sparse.data(), cells));
  };

  // Alternates L- and S-steps at rank k until the residual or the change in
  // L falls below tol, with zeta = beta * sigma_{k+1} + decay^t * head.
  auto run_stage = [&](std::size_t k, double head_scale, bool head_is_sigma,
                       std::vector<double>& trace) {
    const std::size_t probe = std::min(k + 1, n);
    for (std::size_t t = 0;; ++t) {
      if (iteration >= params.max_iters) {
        exhausted = true;
        return false;
      }
      ++iteration;
      kernels::sub(m.values.data(), sparse.data(), scratch.data(), cells);  // M - S
      const SvdResult svd = leading(scratch, probe, have_warm ? &warm : nullptr);
      warm = svd.right;
      have_warm = true;
      previous_low = low;
      low = reconstruct(svd, k);
      if (params.skew) skew_project(low);

      const double sigma_k = svd.singular_values.size() >= k ? svd.singular_values[k - 1] : 0.0;
      const double sigma_next = svd.singular_values.size() > k ? svd.singular_values[k] : 0.0;
      const double fade = std::pow(params.decay, static_cast<double>(t));
      const double head = head_is_sigma ? beta * sigma_k : head_scale;
      const double zeta = beta * sigma_next + fade * head;
      residual = sparse_step(zeta);
      trace.push_back(residual);

      const double change = std::sqrt(kernels::sum_sq_diff(low.data(), previous_low.data(), cells)) /
                            std::max(frobenius_norm(low), 1e-300);
      // A stalled L only counts once the decaying part of the threshold is spent.
      if (residual <= params.tol * m_norm || (fade <= params.tol && change <= params.tol)) {
        return true;
      }
    }
  };

  bool converged = false;
  const std::vector<std::size_t> stages = rank_stages(params, n);
  for (std::size_t si = 0; si < stages.size() && !exhausted; ++si) {
    const std::size_t k = stages[si];
    converged = run_stage(k, 0.0, true, report.residual_trace);
    if (converged && si + 1 < stages.size()) {
      // Stop raising the rank once the next singular value carries no signal.
      kernels::sub(m.values.data(), sparse.data(), scratch.data(), cells);
      const SvdResult svd = leading(scratch, std::min(k + 1, n), nullptr);
      const double next = svd.singular_values.size() > k ? svd.singular_values[k] : 0.0;
      if (beta * next <= params.tol * m_norm) break;
    }
  }

  auto support_size = [&]() {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = params.skew ? 0.5 * (sparse(i, j) - sparse(j, i)) : sparse(i, j);
        if (std::fabs(v) > params.support_tol) ++count;
      }
    }
    return count;
  };

  if (params.consensus_repair && params.skew && r % 2 == 0 && !exhausted) {
    // The repaired iterate restarts the alternating steps; it is kept only if
    // it explains the data with no more detected pairs and converges no worse.
    const DenseMatrix kept_low = low;
    const DenseMatrix kept_sparse = sparse;
    const double kept_residual = residual;
    const bool kept_converged = converged;
    const std::size_t kept_support = support_size();
    const double tau = std::max(report.threshold_trace.back(), params.support_tol);
    const std::size_t moves = consensus_repair(m.values, low, r, tau, params);
    if (moves > 0) {
      residual = sparse_step(tau);
      report.repair_trace.push_back(residual);
      have_warm = false;
      const bool repaired_converged = run_stage(r, tau, false, report.repair_trace);
      if (support_size() <= kept_support && (repaired_converged || !kept_converged)) {
        report.repair_moves = moves;
        converged = repaired_converged;
      } else {
        low = kept_low;
        sparse = kept_sparse;
        residual = kept_residual;
        converged = kept_converged;
      }
    }
  }

  report.converged = converged;
  report.iterations_used = iteration;
  report.residual_frobenius = residual;
  report.l_hat.values = low;
  report.singular_values = singular_values(low);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = params.skew ? 0.5 * (sparse(i, j) - sparse(j, i)) : sparse(i, j);
      if (!(std::fabs(s) > params.support_tol)) continue;
      report.s_hat.entries.push_back({i, j, s});
      report.detected_pairs.emplace_back(i, j);
    }
  }
  return report;
}

// For logits of the form f_j - f_i the triangle inequality gives
// |L_ij| <= |L_ik| + |L_kj| for every k, so the median over k of
// |M_ik| + |M_kj| bounds |L_ij| while fewer than a quarter of each row is
// corrupted. Entries above that bound are zeroed before estimating beta, which
// keeps a few large spikes from capturing the leading singular vectors.
double screened_beta(const LogitMatrix& m, std::size_t r, const SolverParams& params) {
  const std::size_t n = m.n();
  if (n < 4) return 0.0;
  DenseMatrix screened = m.values;
  std::vector<double> sums;
  sums.reserve(n);
  std::size_t removed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sums.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && k != j) sums.push_back(std::fabs(m.values(i, k)) + std::fabs(m.values(k, j)));
      }
      auto mid = sums.begin() + static_cast<std::ptrdiff_t>(sums.size() / 2);
      std::nth_element(sums.begin(), mid, sums.end());
      if (std::fabs(m.values(i, j)) > *mid) {
        screened(i, j) = 0.0;
        screened(j, i) = 0.0;
        ++removed;
      }
    }
  }
  if (removed == 0) return 0.0;
  SubspaceOptions options;
  options.seed = params.seed;
  const SvdResult top = leading_svd(screened, r, params.svd_method, options, nullptr, params.dense_cutoff);
  if (top.singular_values.empty() || !(top.singular_values[0] > 0.0)) return 0.0;
  return incoherence_beta(top, r);
}

}  // namespace

RecoveryReport rpca(const LogitMatrix& m, const SolverParams& params) {
  params.validate();
  RecoveryReport primary = rpca_once(m, params);
  if (params.beta > 0.0 || !params.skew) return primary;

  // A data-driven beta can be misled when a few corruptions dominate the
  // spectrum. Retry with a screened estimate, and adopt it only if it turns an
  // inexact fit into an exact one.
  const double m_norm = frobenius_norm(m.values);
  const double exact = 1e-6 * m_norm;
  if (!(primary.residual_frobenius > exact)) return primary;
  const double beta = screened_beta(m, std::min(params.target_rank, m.n()), params);
  if (!(beta > 0.0) || std::fabs(beta - primary.beta) <= 1e-12) return primary;
  SolverParams alt = params;
  alt.beta = beta;
  RecoveryReport second = rpca_once(m, alt);
  // An exact fit only says something if the clean pairs over-determine L:
  // at least twice the r (2n - r - 1) / 2 parameters of a rank-r skew matrix.
  const std::size_t n = m.n();
  const std::size_t r = std::min(params.target_rank, n);
  const std::size_t pairs = n * (n - 1) / 2;
  const std::size_t dof = r * (2 * n - r - 1) / 2;
  const std::size_t clean = pairs - std::min(pairs, second.detected_pairs.size());
  const bool informative = clean >= 2 * dof;
  return second.residual_frobenius <= exact && second.converged && informative ? second : primary;
}

}  // namespace prefrepair
