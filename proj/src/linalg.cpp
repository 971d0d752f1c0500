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

#include "prefrepair/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "prefrepair/kernels.hpp"

namespace prefrepair {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DenseMatrix& a) {
  return {a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

// out.row(c) = A * q.row(c)
void multiply_rows(const DenseMatrix& a, const DenseMatrix& q, DenseMatrix& out) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  out = DenseMatrix(q.rows(), n);
  for (std::size_t c = 0; c < q.rows(); ++c) {
    const double* qc = q.row(c).data();
    double* oc = out.row(c).data();
    for (std::size_t i = 0; i < n; ++i) oc[i] = kernels::dot(a.row(i).data(), qc, m);
  }
}

// out.row(c) = A^T * q.row(c)
void multiply_transposed_rows(const DenseMatrix& a, const DenseMatrix& q, DenseMatrix& out) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  out = DenseMatrix(q.rows(), m);
  for (std::size_t c = 0; c < q.rows(); ++c) {
    const double* qc = q.row(c).data();
    double* oc = out.row(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      if (qc[i] != 0.0) kernels::axpy(qc[i], a.row(i).data(), oc, m);
    }
  }
}

}  // namespace

SvdResult dense_svd(const DenseMatrix& a) {
  SvdResult out;
  const std::size_t k = std::min(a.rows(), a.cols());
  if (k == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  out.singular_values.assign(s.data(), s.data() + k);
  out.left = DenseMatrix(k, a.rows());
  out.right = DenseMatrix(k, a.cols());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < a.rows(); ++i) out.left(c, i) = u(i, c);
    for (std::size_t j = 0; j < a.cols(); ++j) out.right(c, j) = v(j, c);
  }
  out.iterations = 1;
  return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
  if (a.empty()) return {};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

void orthonormalize_rows(DenseMatrix& q, std::uint64_t seed) {
  const std::size_t len = q.cols();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t c = 0; c < q.rows(); ++c) {
    double* qc = q.row(c).data();
    const double original = std::sqrt(kernels::sum_sq(qc, len));
    for (int attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < c; ++p) {
          const double* qp = q.row(p).data();
          kernels::axpy(-kernels::dot(qp, qc, len), qp, qc, len);
        }
      }
      const double norm = std::sqrt(kernels::sum_sq(qc, len));
      if (norm > 1e-10 * std::max(original, 1e-300) && norm > 1e-280) {
        kernels::scale(1.0 / norm, qc, len);
        break;
      }
      if (attempt > 8) throw std::runtime_error("orthonormalize_rows: cannot complete basis");
      for (std::size_t i = 0; i < len; ++i) qc[i] = gauss(rng);
    }
  }
}

SvdResult truncated_svd(const DenseMatrix& a, std::size_t k, const SubspaceOptions& options,
                        const DenseMatrix* warm_start) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const std::size_t full = std::min(n, m);
  if (k == 0 || full == 0) return {};
  k = std::min(k, full);
  const std::size_t block = std::min(k + options.oversample, full);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  DenseMatrix right(block, m);
  std::size_t seeded = 0;
  if (warm_start != nullptr && warm_start->cols() == m) {
    seeded = std::min(block, warm_start->rows());
    for (std::size_t c = 0; c < seeded; ++c) {
      std::copy(warm_start->row(c).begin(), warm_start->row(c).end(), right.row(c).begin());
    }
  }
  for (std::size_t c = seeded; c < block; ++c) {
    for (std::size_t j = 0; j < m; ++j) right(c, j) = gauss(rng);
  }
  orthonormalize_rows(right, options.seed + 1);

  SvdResult out;
  out.converged = false;
  DenseMatrix left;
  DenseMatrix projected;
  DenseMatrix image;
  const double a_norm = frobenius_norm(a);
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    multiply_rows(a, right, left);
    orthonormalize_rows(left, options.seed + 2 * it);
    multiply_transposed_rows(a, left, projected);  // rows of (Q^T A)

    // Rayleigh-Ritz on the block x m projection.
    Eigen::MatrixXd small = as_eigen(projected).transpose();  // m x block
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(small, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const auto& z = svd.matrixU();  // m x block, right singular vectors of A
    const auto& y = svd.matrixV();  // block x block, rotates the left basis

    DenseMatrix new_right(block, m);
    DenseMatrix new_left(block, n);
    for (std::size_t c = 0; c < block; ++c) {
      for (std::size_t j = 0; j < m; ++j) new_right(c, j) = z(j, c);
      double* lc = new_left.row(c).data();
      for (std::size_t p = 0; p < block; ++p) kernels::axpy(y(p, c), left.row(p).data(), lc, n);
    }
    right = std::move(new_right);
    out.singular_values.assign(s.data(), s.data() + block);
    out.iterations = it;

    const double sigma1 = out.singular_values.empty() ? 0.0 : out.singular_values[0];
    if (sigma1 <= 1e-300 || a_norm <= 1e-300) {
      left = std::move(new_left);
      out.converged = true;
      break;
    }
    DenseMatrix head(k, m);
    std::copy(right.data(), right.data() + k * m, head.data());
    multiply_rows(a, head, image);
    double worst = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      kernels::axpy(-out.singular_values[c], new_left.row(c).data(), image.row(c).data(), n);
      worst = std::max(worst, std::sqrt(kernels::sum_sq(image.row(c).data(), n)));
    }
    left = std::move(new_left);
    if (worst <= options.tol * sigma1) {
      out.converged = true;
      break;
    }
  }

  out.singular_values.resize(k);
  out.left = DenseMatrix(k, n);
  out.right = DenseMatrix(k, m);
  std::copy(left.data(), left.data() + k * n, out.left.data());
  std::copy(right.data(), right.data() + k * m, out.right.data());
  return out;
}

SvdResult leading_svd(const DenseMatrix& a, std::size_t k, SvdMethod method,
                      const SubspaceOptions& options, const DenseMatrix* warm_start,
                      std::size_t dense_cutoff) {
  const bool dense = method == SvdMethod::kDense ||
                     (method == SvdMethod::kAuto && a.rows() <= dense_cutoff);
  if (!dense) return truncated_svd(a, k, options, warm_start);
  SvdResult full = dense_svd(a);
  k = std::min(k, full.singular_values.size());
  SvdResult out;
  out.singular_values.assign(full.singular_values.begin(), full.singular_values.begin() + k);
  out.left = DenseMatrix(k, a.rows());
  out.right = DenseMatrix(k, a.cols());
  std::copy(full.left.data(), full.left.data() + k * a.rows(), out.left.data());
  std::copy(full.right.data(), full.right.data() + k * a.cols(), out.right.data());
  out.iterations = 1;
  return out;
}

DenseMatrix reconstruct(const SvdResult& svd, std::size_t k) {
  const std::size_t n = svd.left.cols();
  const std::size_t m = svd.right.cols();
  DenseMatrix out(n, m);
  k = std::min(k, svd.singular_values.size());
  for (std::size_t i = 0; i < n; ++i) {
    double* oi = out.row(i).data();
    for (std::size_t c = 0; c < k; ++c) {
      const double w = svd.singular_values[c] * svd.left(c, i);
      if (w != 0.0) kernels::axpy(w, svd.right.row(c).data(), oi, m);
    }
  }
  return out;
}

}  // namespace prefrepair
