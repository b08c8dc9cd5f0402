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

#ifndef HPCA_LINALG_H_
#define HPCA_LINALG_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace hpca {

// Dense row-major matrix of finite doubles. A default-constructed Matrix is
// empty (0 x 0) and only serves as a placeholder; every Matrix produced by a
// factory or an operation has at least one row and one column.
class Matrix {
 public:
  Matrix() = default;

  // Zero-filled rows x cols matrix. Both dimensions must be positive.
  Matrix(size_t rows, size_t cols);

  // Validates shape and finiteness.
  static absl::StatusOr<Matrix> Create(size_t rows, size_t cols,
                                       std::vector<double> data);
  static absl::StatusOr<Matrix> FromRows(
      const std::vector<std::vector<double>>& rows);
  static Matrix Identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }
  std::span<const double> row(size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool operator==(const Matrix& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// Eigenvalues sorted descending; column j of `vectors` pairs with values[j].
struct EigenPairs {
  std::vector<double> values;
  Matrix vectors;
};

struct JacobiOptions {
  // Rotations stop once the off-diagonal Frobenius norm drops to
  // tol * ||C||_F.
  double tol = 1e-12;
  int max_sweeps = 100;
};

std::vector<double> ColumnSums(const Matrix& x);

// result[j][t] = x[j][t] - mean[t].
absl::StatusOr<Matrix> CenterColumns(const Matrix& x,
                                     std::span<const double> mean);

// x^T x. The upper triangle is accumulated and mirrored, so the result is
// exactly symmetric.
Matrix Gram(const Matrix& x);

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
absl::StatusOr<EigenPairs> JacobiEigh(const Matrix& c,
                                      const JacobiOptions& options = {});

// The eigenvectors of the k largest eigenvalues as a d x k matrix. Each column
// is sign-canonicalized: its largest-magnitude entry (lowest index on ties) is
// positive.
absl::StatusOr<Matrix> TopKTransfer(const EigenPairs& pairs, size_t k);

absl::StatusOr<Matrix> Project(const Matrix& x, const Matrix& transfer);

struct PcaResult {
  Matrix transfer;
  Matrix reduced;
  std::vector<double> mean;
  Matrix covariance;
  std::vector<double> eigenvalues;
};

// Plaintext PCA over all rows: centers by column means, forms
// C = X^T X / (n - 1), eigendecomposes and projects. Column means and the
// covariance are accumulated over the rows in lexicographic order, so the
// transfer matrix is bit-identical for any permutation of the input rows.
absl::StatusOr<PcaResult> CentralizedPca(const Matrix& x, size_t k,
                                         const JacobiOptions& options = {});

// Helpers shared by the protocol and the evaluation harness.
Matrix Transpose(const Matrix& x);
absl::StatusOr<Matrix> Multiply(const Matrix& a, const Matrix& b);
absl::StatusOr<Matrix> Add(const Matrix& a, const Matrix& b);
Matrix Scale(const Matrix& x, double factor);
absl::StatusOr<Matrix> VStack(std::span<const Matrix> blocks);
Matrix SelectRows(const Matrix& x, std::span<const size_t> rows);
double FrobeniusNorm(const Matrix& x);
double Trace(const Matrix& x);
// Largest |a - b| over all entries; +inf on shape mismatch.
double MaxAbsDiff(const Matrix& a, const Matrix& b);

// Largest principal angle (radians) between the column spaces of two d x k
// matrices with orthonormal columns. Computed from the sine,
// ||(I - A A^T) B||_2, which stays accurate for nearly equal subspaces.
absl::StatusOr<double> LargestPrincipalAngle(const Matrix& a, const Matrix& b);

// Solves A x = b for symmetric positive-definite A by Cholesky factorization.
absl::StatusOr<std::vector<double>> CholeskySolve(const Matrix& a,
                                                  std::span<const double> b);

}  // namespace hpca

#endif  // HPCA_LINALG_H_
