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

#include "prefrepair/error.hpp"
#include "prefrepair/kernels.hpp"
#include "prefrepair/recovery.hpp"

namespace prefrepair {
namespace {

using Eigen::MatrixXd;

MatrixXd orthonormal_columns(const MatrixXd& a) {
  Eigen::HouseholderQR<MatrixXd> qr(a);
  return qr.householderQ() * MatrixXd::Identity(a.rows(), a.cols());
}

// Factorization state: fit = X * S * Y^T with orthonormal X, Y.
struct Factors {
  MatrixXd x;
  MatrixXd y;
  MatrixXd s;
};

class ObservedProblem {
 public:
  ObservedProblem(const DenseMatrix& values, const Mask& mask)
      : n_(values.rows()), values_(values), weights_(n_, n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (mask(i, j)) {
          weights_(i, j) = 1.0;
          observed_.emplace_back(i, j);
        }
      }
    }
    DenseMatrix masked(n_, n_);
    DenseMatrix zeros(n_, n_);
    kernels::masked_sub(values_.data(), zeros.data(), weights_.data(), masked.data(), n_ * n_);
    observed_norm_ = frobenius_norm(masked);
  }

  std::size_t observed_count() const { return observed_.size(); }
  double observed_norm() const { return observed_norm_; }
  const DenseMatrix& weights() const { return weights_; }

  // Least-squares core S for fixed X, Y over the observed cells.
  bool solve_core(Factors& f) const {
    const Eigen::Index r = f.x.cols();
    const Eigen::Index q = r * r;
    MatrixXd normal = MatrixXd::Zero(q, q);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd phi(q);
    for (const auto& [i, j] : observed_) {
      for (Eigen::Index a = 0; a < r; ++a) {
        for (Eigen::Index b = 0; b < r; ++b) {
          phi(a * r + b) = f.x(static_cast<Eigen::Index>(i), a) * f.y(static_cast<Eigen::Index>(j), b);
        }
      }
      normal.noalias() += phi * phi.transpose();
      rhs.noalias() += phi * values_(i, j);
    }
    Eigen::LDLT<MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    Eigen::VectorXd sol = ldlt.solve(rhs);
    if (!sol.allFinite()) {
      sol = normal.completeOrthogonalDecomposition().solve(rhs);
      if (!sol.allFinite()) return false;
    }
    f.s.resize(r, r);
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index b = 0; b < r; ++b) f.s(a, b) = sol(a * r + b);
    }
    return true;
  }

  DenseMatrix fit(const Factors& f) const {
    const MatrixXd xs = f.x * f.s;
    DenseMatrix out(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        out(i, j) = xs.row(static_cast<Eigen::Index>(i)).dot(f.y.row(static_cast<Eigen::Index>(j)));
      }
    }
    return out;
  }

  // W = P_Omega(fit - M); returns 0.5 * ||W||_F^2.
  double residual(const Factors& f, DenseMatrix& w) const {
    const DenseMatrix current = fit(f);
    w = DenseMatrix(n_, n_);
    kernels::masked_sub(current.data(), values_.data(), weights_.data(), w.data(), n_ * n_);
    return 0.5 * kernels::sum_sq(w.data(), w.size());
  }

 private:
  std::size_t n_;
  const DenseMatrix& values_;
  DenseMatrix weights_;
  std::vector<std::pair<std::size_t, std::size_t>> observed_;
  double observed_norm_ = 0.0;
};

MatrixXd to_eigen(const DenseMatrix& a) {
  MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    }
  }
  return out;
}

}  // namespace

CompletionResult complete(const LogitMatrix& m, const SolverParams& params) {
  params.validate();
  const std::size_t n = m.n();
  CompletionResult result;
  result.completed = LogitMatrix{m.values, Mask(n, true), m.link};
  if (m.mask.all()) {
    if (params.skew) skew_project(result.completed.values);
    result.converged = true;
    return result;
  }
  ObservedProblem problem(m.values, m.mask);
  if (problem.observed_count() == 0) {
    throw ValidationError("completion needs at least one observed entry");
  }
  if (problem.observed_norm() == 0.0) {
    // Every observed value is zero; the rank-r fit is the zero matrix.
    result.completed.values = DenseMatrix(n, n);
    result.converged = true;
    return result;
  }
  const std::size_t r = std::min(params.target_rank, n);

  // Trimmed, rescaled observed matrix for the spectral start.
  DenseMatrix start(n, n);
  kernels::masked_sub(m.values.data(), DenseMatrix(n, n).data(), problem.weights().data(),
                      start.data(), n * n);
  if (params.optspace_trim) {
    const double limit = 2.0 * static_cast<double>(problem.observed_count()) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      double row_degree = 0.0;
      double col_degree = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row_degree += m.mask(i, j) ? 1.0 : 0.0;
        col_degree += m.mask(j, i) ? 1.0 : 0.0;
      }
      if (row_degree > limit) {
        for (std::size_t j = 0; j < n; ++j) start(i, j) = 0.0;
      }
      if (col_degree > limit) {
        for (std::size_t j = 0; j < n; ++j) start(j, i) = 0.0;
      }
    }
  }
  kernels::scale(static_cast<double>(n * n) / static_cast<double>(problem.observed_count()),
                 start.data(), start.size());
  const SvdResult init = dense_svd(start);
  Factors f;
  f.x = to_eigen(init.left).topRows(static_cast<Eigen::Index>(r)).transpose();
  f.y = to_eigen(init.right).topRows(static_cast<Eigen::Index>(r)).transpose();
  f.x = orthonormal_columns(f.x);
  f.y = orthonormal_columns(f.y);
  if (!problem.solve_core(f)) {
    result.converged = false;
    result.observed_residual = 1.0;
    return result;
  }

  DenseMatrix w;
  double objective = problem.residual(f, w);
  const double target = params.tol * problem.observed_norm();
  double step = 0.0;
  {
    Eigen::JacobiSVD<MatrixXd> core(f.s);
    const double top = core.singularValues()(0);
    step = top > 0.0 ? 1.0 / (top * top) : 1.0;
  }

  bool converged = false;
  std::size_t it = 0;
  for (; it < params.max_iters; ++it) {
    const double misfit = std::sqrt(2.0 * objective);
    if (misfit <= target) {
      converged = true;
      break;
    }
    const MatrixXd wm = to_eigen(w);
    MatrixXd gx = wm * f.y * f.s.transpose();
    MatrixXd gy = wm.transpose() * f.x * f.s;
    gx -= f.x * (f.x.transpose() * gx);
    gy -= f.y * (f.y.transpose() * gy);
    const double grad_sq = gx.squaredNorm() + gy.squaredNorm();
    if (grad_sq == 0.0) {
      converged = true;
      break;
    }

    step *= 2.0;
    bool accepted = false;
    Factors trial;
    DenseMatrix trial_w;
    double trial_objective = objective;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial.x = orthonormal_columns(f.x - step * gx);
      trial.y = orthonormal_columns(f.y - step * gy);
      if (problem.solve_core(trial)) {
        trial_objective = problem.residual(trial, trial_w);
        if (trial_objective <= objective - 1e-4 * step * grad_sq) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent direction left at machine precision: a stationary point.
      converged = true;
      break;
    }
    const double gain = (objective - trial_objective) / std::max(objective, 1e-300);
    f = std::move(trial);
    w = std::move(trial_w);
    objective = trial_objective;
    if (gain <= params.tol * params.tol) {
      converged = true;
      ++it;
      break;
    }
  }

  result.iterations = it;
  result.converged = converged;
  result.observed_residual = std::sqrt(2.0 * objective) / problem.observed_norm();
  const DenseMatrix fitted = problem.fit(f);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.mask(i, j)) result.completed.values(i, j) = fitted(i, j);
    }
  }
  if (params.skew) skew_project(result.completed.values);
  return result;
}

}  // namespace prefrepair
