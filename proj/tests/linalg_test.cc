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
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace hpca {
namespace {

Matrix RandomMatrix(size_t rows, size_t cols, std::mt19937_64& rng,
                    double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

Matrix RandomSymmetric(size_t d, std::mt19937_64& rng) {
  Matrix a = RandomMatrix(d, d, rng);
  Matrix s(d, d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) s(i, j) = a(i, j) + a(j, i);
  }
  return s;
}

Matrix M(const std::vector<std::vector<double>>& rows) {
  return *Matrix::FromRows(rows);
}

// Cofactor expansion along the first row.
double Determinant(const Matrix& a) {
  const size_t n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0;
  for (size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (size_t r = 1; r < n; ++r) {
      size_t cc = 0;
      for (size_t c = 0; c < n; ++c) {
        if (c != j) minor(r - 1, cc++) = a(r, c);
      }
    }
    det += (j % 2 == 0 ? 1 : -1) * a(0, j) * Determinant(minor);
  }
  return det;
}

double ResidualNorm(const Matrix& c, const EigenPairs& p, size_t j) {
  double sum = 0;
  for (size_t r = 0; r < c.rows(); ++r) {
    double cv = 0;
    for (size_t t = 0; t < c.cols(); ++t) cv += c(r, t) * p.vectors(t, j);
    const double e = cv - p.values[j] * p.vectors(r, j);
    sum += e * e;
  }
  return std::sqrt(sum);
}

TEST(MatrixTest, CreateValidatesShapeAndFiniteness) {
  EXPECT_FALSE(Matrix::Create(0, 2, {}).ok());
  EXPECT_FALSE(Matrix::Create(2, 2, {1, 2, 3}).ok());
  EXPECT_FALSE(Matrix::Create(1, 2, {1, NAN}).ok());
  EXPECT_FALSE(Matrix::Create(1, 1, {INFINITY}).ok());
  EXPECT_FALSE(Matrix::FromRows({{1, 2}, {3}}).ok());
  ASSERT_TRUE(Matrix::Create(1, 2, {1, 2}).ok());
}

TEST(ColumnSumsTest, HandExamples) {
  EXPECT_EQ(ColumnSums(M({{1, 2}, {3, 4}})), (std::vector<double>{4, 6}));
  EXPECT_EQ(ColumnSums(Matrix(3, 2)), (std::vector<double>{0, 0}));
}

TEST(ColumnSumsTest, MatchesElementwiseAccumulation) {
  std::mt19937_64 rng(1);
  Matrix x = RandomMatrix(50, 5, rng);
  const std::vector<double> sums = ColumnSums(x);
  for (size_t c = 0; c < 5; ++c) {
    double oracle = 0;
    for (size_t r = 0; r < 50; ++r) oracle += x(r, c);
    EXPECT_NEAR(sums[c], oracle, 1e-12);
  }
}

TEST(CenterColumnsTest, HandExample) {
  EXPECT_EQ(*CenterColumns(M({{1, 2}, {3, 4}}), std::vector<double>{2, 3}),
            M({{-1, -1}, {1, 1}}));
}

TEST(CenterColumnsTest, ColumnMeanCentersToZero) {
  std::mt19937_64 rng(2);
  Matrix x = RandomMatrix(30, 4, rng, -100, 100);
  std::vector<double> mean = ColumnSums(x);
  for (double& v : mean) v /= 30.0;
  for (double s : ColumnSums(*CenterColumns(x, mean))) EXPECT_NEAR(s, 0, 1e-12);
}

TEST(CenterColumnsTest, ZeroMeanIsIdentityAndLengthChecked) {
  std::mt19937_64 rng(3);
  Matrix x = RandomMatrix(4, 3, rng);
  EXPECT_EQ(*CenterColumns(x, std::vector<double>(3, 0.0)), x);
  absl::StatusOr<Matrix> bad = CenterColumns(x, std::vector<double>(2, 0.0));
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(GramTest, HandExamples) {
  EXPECT_EQ(Gram(M({{1, 0}, {0, 1}})), M({{1, 0}, {0, 1}}));
  EXPECT_EQ(Gram(M({{1, 2}})), M({{1, 2}, {2, 4}}));
}

TEST(GramTest, MatchesTripleLoopAndIsExactlySymmetric) {
  std::mt19937_64 rng(4);
  Matrix x = RandomMatrix(20, 4, rng);
  Matrix g = Gram(x);
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      double oracle = 0;
      for (size_t r = 0; r < 20; ++r) oracle += x(r, i) * x(r, j);
      EXPECT_NEAR(g(i, j), oracle, 1e-12);
      EXPECT_EQ(g(i, j), g(j, i));
    }
  }
}

TEST(GramTest, GlobalGramDecomposesOverPartitions) {
  std::mt19937_64 rng(5);
  Matrix x = RandomMatrix(40, 5, rng);
  std::vector<double> mean = ColumnSums(x);
  for (double& v : mean) v /= 40.0;
  Matrix centered = *CenterColumns(x, mean);
  const std::vector<size_t> cuts = {0, 7, 19, 40};
  Matrix sum(5, 5);
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    std::vector<size_t> rows;
    for (size_t r = cuts[p]; r < cuts[p + 1]; ++r) rows.push_back(r);
    sum = *Add(sum, Gram(SelectRows(centered, rows)));
  }
  EXPECT_LE(MaxAbsDiff(sum, Gram(centered)), 1e-12);
}

TEST(JacobiTest, DiagonalMatrix) {
  EigenPairs p = *JacobiEigh(M({{2, 0}, {0, 1}}));
  EXPECT_EQ(p.values, (std::vector<double>{2, 1}));
  EXPECT_NEAR(std::abs(p.vectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(p.vectors(1, 1)), 1.0, 1e-15);
}

TEST(JacobiTest, OffDiagonalTwoByTwo) {
  EigenPairs p = *JacobiEigh(M({{0, 1}, {1, 0}}));
  EXPECT_NEAR(p.values[0], 1.0, 1e-14);
  EXPECT_NEAR(p.values[1], -1.0, 1e-14);
}

TEST(JacobiTest, RandomSymmetricResidualsTraceAndDeterminant) {
  std::mt19937_64 rng(6);
  for (size_t d : {2, 3, 5, 6, 8}) {
    Matrix c = RandomSymmetric(d, rng);
    const double norm = FrobeniusNorm(c);
    EigenPairs p = *JacobiEigh(c);
    double sum = 0, prod = 1;
    for (size_t j = 0; j < d; ++j) {
      EXPECT_LE(ResidualNorm(c, p, j), 1e-10 * norm) << "d=" << d;
      if (j + 1 < d) EXPECT_GE(p.values[j], p.values[j + 1]);
      sum += p.values[j];
      prod *= p.values[j];
    }
    EXPECT_NEAR(sum, Trace(c), 1e-10 * norm);
    if (d <= 6) {
      const double det = Determinant(c);
      EXPECT_LE(std::abs(prod - det), 1e-8 * std::abs(det)) << "d=" << d;
    }
    Matrix vtv = Multiply(Transpose(p.vectors), p.vectors).value();
    EXPECT_LE(MaxAbsDiff(vtv, Matrix::Identity(d)), 1e-10);
  }
}

TEST(JacobiTest, RejectsNonSymmetricInput) {
  absl::StatusOr<EigenPairs> p = JacobiEigh(M({{1, 2}, {0, 1}}));
  EXPECT_EQ(p.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(JacobiEigh(M({{1, 2, 3}})).ok());
}

TEST(JacobiTest, ReportsNonConvergence) {
  std::mt19937_64 rng(7);
  JacobiOptions opts;
  opts.max_sweeps = 1;
  absl::StatusOr<EigenPairs> p = JacobiEigh(RandomSymmetric(10, rng), opts);
  EXPECT_EQ(p.status().code(), absl::StatusCode::kInternal);
  EXPECT_NE(p.status().message().find("off-diagonal"), std::string::npos);
}

TEST(TopKTransferTest, DominantAxis) {
  Matrix t = *TopKTransfer(*JacobiEigh(M({{2, 0}, {0, 1}})), 1);
  EXPECT_EQ(t, M({{1}, {0}}));
}

TEST(TopKTransferTest, DiagonalThreeByThree) {
  Matrix t = *TopKTransfer(*JacobiEigh(M({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}})), 2);
  EXPECT_EQ(t, M({{1, 0}, {0, 1}, {0, 0}}));
}

TEST(TopKTransferTest, OrthonormalAndSignCanonical) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t d = 2 + trial % 7;
    EigenPairs p = *JacobiEigh(RandomSymmetric(d, rng));
    const size_t k = 1 + trial % (d - 1);
    Matrix t = *TopKTransfer(p, k);
    EXPECT_LE(MaxAbsDiff(*Multiply(Transpose(t), t), Matrix::Identity(k)),
              1e-10);
    // Flipping the sign of any input eigenvector leaves T unchanged.
    EigenPairs flipped = p;
    for (size_t r = 0; r < d; ++r) {
      for (size_t j = 0; j < d; j += 2) flipped.vectors(r, j) *= -1;
    }
    EXPECT_EQ(*TopKTransfer(flipped, k), t);
    for (size_t j = 0; j < k; ++j) {
      size_t best = 0;
      for (size_t r = 1; r < d; ++r) {
        if (std::abs(t(r, j)) > std::abs(t(best, j))) best = r;
      }
      EXPECT_GT(t(best, j), 0);
    }
  }
}

TEST(TopKTransferTest, RejectsBadK) {
  EigenPairs p = *JacobiEigh(M({{2, 0}, {0, 1}}));
  EXPECT_EQ(TopKTransfer(p, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(TopKTransfer(p, 2).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ProjectTest, HandExamples) {
  EXPECT_EQ(*Project(Matrix::Identity(2), M({{1}, {0}})), M({{1}, {0}}));
  std::mt19937_64 rng(9);
  Matrix x = RandomMatrix(3, 4, rng);
  EXPECT_EQ(*Project(x, Matrix::Identity(4)), x);
  EXPECT_FALSE(Project(x, Matrix::Identity(3)).ok());
}

TEST(ProjectTest, MatchesTripleLoop) {
  std::mt19937_64 rng(10);
  Matrix x = RandomMatrix(10, 4, rng);
  Matrix t = RandomMatrix(4, 2, rng);
  Matrix p = *Project(x, t);
  for (size_t r = 0; r < 10; ++r) {
    for (size_t c = 0; c < 2; ++c) {
      double oracle = 0;
      for (size_t i = 0; i < 4; ++i) oracle += x(r, i) * t(i, c);
      EXPECT_NEAR(p(r, c), oracle, 1e-12);
    }
  }
}

TEST(CentralizedPcaTest, RankOneLinePreservesDistances) {
  Matrix x = M({{0, 0}, {1, 2}, {2, 4}, {5, 10}});
  PcaResult pca = *CentralizedPca(x, 1);
  for (size_t a = 0; a < 4; ++a) {
    for (size_t b = 0; b < 4; ++b) {
      const double dx = x(a, 0) - x(b, 0), dy = x(a, 1) - x(b, 1);
      EXPECT_NEAR(std::abs(pca.reduced(a, 0) - pca.reduced(b, 0)),
                  std::sqrt(dx * dx + dy * dy), 1e-10);
    }
  }
}

TEST(CentralizedPcaTest, ReducedVariancesAreTopEigenvalues) {
  std::mt19937_64 rng(11);
  Matrix x = RandomMatrix(60, 6, rng, -3, 3);
  PcaResult pca = *CentralizedPca(x, 3);
  for (size_t j = 0; j < 3; ++j) {
    double mean = 0;
    for (size_t r = 0; r < 60; ++r) mean += pca.reduced(r, j);
    mean /= 60;
    double var = 0;
    for (size_t r = 0; r < 60; ++r) {
      var += (pca.reduced(r, j) - mean) * (pca.reduced(r, j) - mean);
    }
    var /= 59;
    EXPECT_NEAR(var, pca.eigenvalues[j], 1e-10);
  }
}

TEST(CentralizedPcaTest, DuplicateRowsMatchReweightedCovariance) {
  // Rows with multiplicities; the oracle works on the distinct rows only.
  const std::vector<std::vector<double>> distinct = {
      {1, 2, 0.5}, {-1, 0, 2}, {3, 1, -1}, {0, -2, 1}};
  const std::vector<int> weight = {3, 1, 2, 4};
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < distinct.size(); ++i) {
    for (int w = 0; w < weight[i]; ++w) rows.push_back(distinct[i]);
  }
  const double n = static_cast<double>(rows.size());
  std::vector<double> mean(3, 0.0);
  for (size_t i = 0; i < distinct.size(); ++i) {
    for (size_t c = 0; c < 3; ++c) mean[c] += weight[i] * distinct[i][c] / n;
  }
  Matrix oracle(3, 3);
  for (size_t i = 0; i < distinct.size(); ++i) {
    for (size_t a = 0; a < 3; ++a) {
      for (size_t b = 0; b < 3; ++b) {
        oracle(a, b) += weight[i] * (distinct[i][a] - mean[a]) *
                        (distinct[i][b] - mean[b]) / (n - 1);
      }
    }
  }
  PcaResult pca = *CentralizedPca(M(rows), 2);
  EXPECT_LE(MaxAbsDiff(pca.covariance, oracle), 1e-12);
  EXPECT_EQ(pca.transfer, *TopKTransfer(*JacobiEigh(pca.covariance), 2));
}

TEST(CentralizedPcaTest, RowPermutationInvariantExactly) {
  std::mt19937_64 rng(12);
  Matrix x = RandomMatrix(25, 5, rng, -10, 10);
  std::vector<size_t> perm(25);
  for (size_t i = 0; i < 25; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  PcaResult a = *CentralizedPca(x, 2);
  PcaResult b = *CentralizedPca(SelectRows(x, perm), 2);
  EXPECT_EQ(a.transfer, b.transfer);
  EXPECT_EQ(a.covariance, b.covariance);
  EXPECT_EQ(SelectRows(a.reduced, perm), b.reduced);
}

TEST(CentralizedPcaTest, RejectsDegenerateInput) {
  EXPECT_EQ(CentralizedPca(M({{1, 2, 3}}), 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(CentralizedPca(M({{1, 2}, {3, 4}}), 2).ok());
}

TEST(PrincipalAngleTest, RotationWithinSubspaceAndOrthogonalSubspaces) {
  const double s = std::sqrt(0.5);
  Matrix a = M({{1, 0}, {0, 1}, {0, 0}});
  Matrix rotated = M({{s, -s}, {s, s}, {0, 0}});
  EXPECT_NEAR(*LargestPrincipalAngle(a, rotated), 0.0, 1e-15);
  Matrix e3 = M({{0}, {0}, {1}});
  Matrix e1 = M({{1}, {0}, {0}});
  EXPECT_NEAR(*LargestPrincipalAngle(e1, e3), std::numbers::pi / 2, 1e-12);
  const double t = 1e-7;
  Matrix tilted = M({{std::cos(t)}, {0}, {std::sin(t)}});
  EXPECT_NEAR(*LargestPrincipalAngle(e1, tilted), t, 1e-15);
}

TEST(CholeskySolveTest, SolvesAndRejectsIndefinite) {
  std::vector<double> x = *CholeskySolve(M({{4, 2}, {2, 3}}), std::vector<double>{2, 5});
  // 4a + 2b = 2, 2a + 3b = 5 -> a = -0.5, b = 2.
  EXPECT_NEAR(x[0], -0.5, 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
  EXPECT_EQ(CholeskySolve(M({{1, 2}, {2, 1}}), std::vector<double>{1, 1})
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

}  // namespace
}  // namespace hpca
