/*
 * Copyright 2026 The hpca Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hpca/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace hpca {

Matrix::Matrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

absl::StatusOr<Matrix> Matrix::Create(size_t rows, size_t cols,
                                      std::vector<double> data) {
  if (rows == 0 || cols == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("matrix must be non-empty, got %d x %d", rows, cols));
  }
  if (data.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrFormat("matrix %d x %d needs %d entries, got %d", rows, cols,
                        rows * cols, data.size()));
  }
  for (size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite entry at (%d, %d)", i / cols, i % cols));
    }
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

absl::StatusOr<Matrix> Matrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  const size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "ragged row %d: %d entries, expected %d", r, rows[r].size(), cols));
    }
    data.insert(data.end(), rows[r].begin(), rows[r].end());
  }
  return Create(rows.size(), cols, std::move(data));
}

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> ColumnSums(const Matrix& x) {
  std::vector<double> sums(x.cols(), 0.0);
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) sums[c] += x(r, c);
  }
  return sums;
}

absl::StatusOr<Matrix> CenterColumns(const Matrix& x,
                                     std::span<const double> mean) {
  if (mean.size() != x.cols()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension mismatch: mean has %d entries, matrix has "
                        "%d columns",
                        mean.size(), x.cols()));
  }
  Matrix out = x;
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) out(r, c) -= mean[c];
  }
  return out;
}

Matrix Gram(const Matrix& x) {
  const size_t d = x.cols();
  Matrix g(d, d);
  for (size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    for (size_t i = 0; i < d; ++i) {
      const double xi = row[i];
      for (size_t j = i; j < d; ++j) g(i, j) += xi * row[j];
    }
  }
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

namespace {

double OffDiagonalNorm(const Matrix& a) {
  double sum = 0.0;
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// Zeroes a(p, q) with one Jacobi rotation and accumulates it into v.
void Rotate(Matrix& a, Matrix& v, size_t p, size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) /
        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);
  const size_t n = a.rows();

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = akp - s * (akq + tau * akp);
    a(k, q) = akq + s * (akp - tau * akq);
    a(p, k) = a(k, p);
    a(q, k) = a(k, q);
  }
  for (size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = vkp - s * (vkq + tau * vkp);
    v(k, q) = vkq + s * (vkp - tau * vkq);
  }
}

}  // namespace

absl::StatusOr<EigenPairs> JacobiEigh(const Matrix& c,
                                      const JacobiOptions& options) {
  if (c.empty() || c.rows() != c.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "eigendecomposition needs a square matrix, got %d x %d", c.rows(),
        c.cols()));
  }
  if (!(options.tol > 0.0) || options.max_sweeps < 1) {
    return absl::InvalidArgumentError("tol must be > 0 and max_sweeps >= 1");
  }
  const size_t n = c.rows();
  const double norm = FrobeniusNorm(c);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (std::abs(c(i, j) - c(j, i)) > 1e-9 * norm) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "matrix is not symmetric at (%d, %d): %g vs %g", i, j, c(i, j),
            c(j, i)));
      }
    }
  }

  Matrix a = c;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      a(i, j) = a(j, i) = 0.5 * (c(i, j) + c(j, i));
    }
  }
  Matrix v = Matrix::Identity(n);
  const double threshold = options.tol * norm;

  bool converged = OffDiagonalNorm(a) <= threshold;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (a(p, q) != 0.0) Rotate(a, v, p, q);
      }
    }
    converged = OffDiagonalNorm(a) <= threshold;
  }
  if (!converged) {
    return absl::InternalError(absl::StrFormat(
        "Jacobi did not converge in %d sweeps; off-diagonal norm %g",
        options.max_sweeps, OffDiagonalNorm(a)));
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return a(i, i) > a(j, j); });

  EigenPairs pairs;
  pairs.values.resize(n);
  pairs.vectors = Matrix(n, n);
  for (size_t j = 0; j < n; ++j) {
    pairs.values[j] = a(order[j], order[j]);
    for (size_t r = 0; r < n; ++r) pairs.vectors(r, j) = v(r, order[j]);
  }
  return pairs;
}

absl::StatusOr<Matrix> TopKTransfer(const EigenPairs& pairs, size_t k) {
  const size_t d = pairs.vectors.rows();
  if (k == 0 || k >= d) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must satisfy 1 <= k < d = %d, got %d", d, k));
  }
  Matrix t(d, k);
  for (size_t j = 0; j < k; ++j) {
    size_t pivot = 0;
    for (size_t r = 1; r < d; ++r) {
      if (std::abs(pairs.vectors(r, j)) > std::abs(pairs.vectors(pivot, j))) {
        pivot = r;
      }
    }
    const double sign = pairs.vectors(pivot, j) < 0 ? -1.0 : 1.0;
    for (size_t r = 0; r < d; ++r) t(r, j) = sign * pairs.vectors(r, j);
  }
  return t;
}

absl::StatusOr<Matrix> Project(const Matrix& x, const Matrix& transfer) {
  if (x.cols() != transfer.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: data has %d columns, transfer has %d rows",
        x.cols(), transfer.rows()));
  }
  return Multiply(x, transfer);
}

absl::StatusOr<PcaResult> CentralizedPca(const Matrix& x, size_t k,
                                         const JacobiOptions& options) {
  if (x.rows() < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("PCA needs at least 2 rows, got %d", x.rows()));
  }
  if (k == 0 || k >= x.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "k must satisfy 1 <= k < d = %d, got %d", x.cols(), k));
  }
  std::vector<size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    auto ra = x.row(a);
    auto rb = x.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                        rb.end());
  });
  const Matrix sorted = SelectRows(x, order);

  const double n = static_cast<double>(x.rows());
  PcaResult result;
  result.mean = ColumnSums(sorted);
  for (double& m : result.mean) m /= n;

  absl::StatusOr<Matrix> centered = CenterColumns(sorted, result.mean);
  if (!centered.ok()) return centered.status();
  result.covariance = Scale(Gram(*centered), 1.0 / (n - 1.0));

  absl::StatusOr<EigenPairs> pairs = JacobiEigh(result.covariance, options);
  if (!pairs.ok()) return pairs.status();
  result.eigenvalues = pairs->values;
  absl::StatusOr<Matrix> transfer = TopKTransfer(*pairs, k);
  if (!transfer.ok()) return transfer.status();
  result.transfer = *std::move(transfer);

  absl::StatusOr<Matrix> original_centered = CenterColumns(x, result.mean);
  if (!original_centered.ok()) return original_centered.status();
  absl::StatusOr<Matrix> reduced = Project(*original_centered, result.transfer);
  if (!reduced.ok()) return reduced.status();
  result.reduced = *std::move(reduced);
  return result;
}

Matrix Transpose(const Matrix& x) {
  Matrix t(x.cols(), x.rows());
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) t(c, r) = x(r, c);
  }
  return t;
}

absl::StatusOr<Matrix> Multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot multiply %d x %d by %d x %d", a.rows(), a.cols(), b.rows(),
        b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      for (size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  }
  return out;
}

absl::StatusOr<Matrix> Add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot add %d x %d and %d x %d", a.rows(), a.cols(), b.rows(),
        b.cols()));
  }
  Matrix out = a;
  auto dst = out.mutable_data();
  auto src = b.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

Matrix Scale(const Matrix& x, double factor) {
  Matrix out = x;
  for (double& v : out.mutable_data()) v *= factor;
  return out;
}

absl::StatusOr<Matrix> VStack(std::span<const Matrix> blocks) {
  if (blocks.empty()) return absl::InvalidArgumentError("nothing to stack");
  const size_t cols = blocks.front().cols();
  size_t rows = 0;
  for (const Matrix& b : blocks) {
    if (b.cols() != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "cannot stack blocks with %d and %d columns", cols, b.cols()));
    }
    rows += b.rows();
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const Matrix& b : blocks) {
    data.insert(data.end(), b.data().begin(), b.data().end());
  }
  return Matrix::Create(rows, cols, std::move(data));
}

Matrix SelectRows(const Matrix& x, std::span<const size_t> rows) {
  Matrix out(rows.size(), x.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(),
              out.mutable_data().begin() + i * x.cols());
  }
  return out;
}

double FrobeniusNorm(const Matrix& x) {
  double sum = 0.0;
  for (double v : x.data()) sum += v * v;
  return std::sqrt(sum);
}

double Trace(const Matrix& x) {
  double sum = 0.0;
  for (size_t i = 0; i < std::min(x.rows(), x.cols()); ++i) sum += x(i, i);
  return sum;
}

double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

absl::StatusOr<double> LargestPrincipalAngle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "subspace bases differ in shape: %d x %d vs %d x %d", a.rows(),
        a.cols(), b.rows(), b.cols()));
  }
  absl::StatusOr<Matrix> overlap = Multiply(Transpose(a), b);
  if (!overlap.ok()) return overlap.status();
  absl::StatusOr<Matrix> in_span = Multiply(a, *overlap);
  if (!in_span.ok()) return in_span.status();
  Matrix residual = b;
  for (size_t i = 0; i < residual.data().size(); ++i) {
    residual.mutable_data()[i] -= in_span->data()[i];
  }
  absl::StatusOr<Matrix> squared = Multiply(Transpose(residual), residual);
  if (!squared.ok()) return squared.status();
  absl::StatusOr<EigenPairs> pairs = JacobiEigh(*squared);
  if (!pairs.ok()) return pairs.status();
  const double sine = std::sqrt(std::max(0.0, pairs->values.front()));
  return std::asin(std::min(1.0, sine));
}

absl::StatusOr<std::vector<double>> CholeskySolve(const Matrix& a,
                                                  std::span<const double> b) {
  const size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    return absl::InvalidArgumentError("Cholesky solve needs square A and |b| = n");
  }
  Matrix l(n, n);
  for (size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "matrix is not positive definite (pivot %d = %g)", j, diag));
    }
    l(j, j) = std::sqrt(diag);
    for (size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (size_t k = 0; k < i; ++k) v -= l(i, k) * y[k];
    y[i] = v / l(i, i);
  }
  std::vector<double> x(n);
  for (size_t i = n; i-- > 0;) {
    double v = y[i];
    for (size_t k = i + 1; k < n; ++k) v -= l(k, i) * x[k];
    x[i] = v / l(i, i);
  }
  return x;
}

}  // namespace hpca
