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

#include "hpca/models.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "hpca/metrics.h"

namespace hpca {
namespace {

TEST(LinregTest, RecoversExactLine) {
  Matrix x = *Matrix::FromRows({{0}, {1}, {2}, {3}});
  const std::vector<double> y = {1, 3, 5, 7};
  LinearModel m = *TrainLinreg(x, y);
  EXPECT_NEAR(m.weights[0], 2.0, 1e-6);
  EXPECT_NEAR(m.intercept, 1.0, 1e-6);
  std::vector<double> pred = PredictLinear(m, *Matrix::FromRows({{10}}));
  EXPECT_NEAR(pred[0], 21.0, 1e-5);
}

// Least squares agrees with the pseudo-inverse solution built from the
// eigendecomposition of the augmented normal matrix.
TEST(LinregTest, MatchesEigenPseudoInverse) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const size_t n = 50, d = 4;
  Matrix x(n, d);
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) x(i, j) = g(rng);
    y[i] = 0.5 * x(i, 0) - 2 * x(i, 3) + 1 + 0.1 * g(rng);
  }
  Matrix a(n, d + 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) a(i, j) = x(i, j);
    a(i, d) = 1;
  }
  const Matrix ata = Gram(a);
  std::vector<double> aty(d + 1, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= d; ++j) aty[j] += a(i, j) * y[i];
  }
  EigenPairs eig = *JacobiEigh(ata);
  std::vector<double> beta(d + 1, 0);
  for (size_t c = 0; c <= d; ++c) {
    double proj = 0;
    for (size_t j = 0; j <= d; ++j) proj += eig.vectors(j, c) * aty[j];
    for (size_t j = 0; j <= d; ++j) {
      beta[j] += eig.vectors(j, c) * proj / eig.values[c];
    }
  }
  LinearModel m = *TrainLinreg(x, y);
  for (size_t j = 0; j < d; ++j) EXPECT_NEAR(m.weights[j], beta[j], 1e-6);
  EXPECT_NEAR(m.intercept, beta[d], 1e-6);
}

TEST(LinregTest, CollinearFeaturesStaySolvable) {
  Matrix x = *Matrix::FromRows({{1, 2}, {2, 4}, {3, 6}, {4, 8}});
  const std::vector<double> y = {1, 2, 3, 4};
  LinearModel m = *TrainLinreg(x, y);
  std::vector<double> pred = PredictLinear(m, x);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(pred[i], y[i], 1e-4);
}

TEST(LinregTest, RejectsTooFewRowsAndMismatch) {
  Matrix x = *Matrix::FromRows({{1, 2}});
  const std::vector<double> one = {1};
  EXPECT_FALSE(TrainLinreg(x, one).ok());
  Matrix x3 = *Matrix::FromRows({{1}, {2}, {3}});
  const std::vector<double> two = {1, 2};
  EXPECT_FALSE(TrainLinreg(x3, two).ok());
}

TEST(LogregTest, SeparableDataGetsPerfectAuc) {
  Matrix x(40, 2);
  std::vector<double> y(40);
  for (size_t i = 0; i < 40; ++i) {
    const bool pos = i % 2 == 0;
    x(i, 0) = (pos ? 2.0 : -2.0) + 0.05 * i;
    x(i, 1) = 0.1 * static_cast<double>(i % 7);
    y[i] = pos ? 1 : 0;
  }
  LinearModel m = *TrainLogreg(x, y);
  std::vector<double> p = PredictProba(m, x);
  EXPECT_DOUBLE_EQ(*Auc(p, y), 1.0);
  for (double v : p) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(LogregTest, RejectsNonBinaryLabels) {
  Matrix x = *Matrix::FromRows({{1}, {2}});
  const std::vector<double> y = {0, 2};
  EXPECT_FALSE(IsBinaryLabels(y));
  EXPECT_FALSE(TrainLogreg(x, y).ok());
  const std::vector<double> ok = {0, 1};
  EXPECT_TRUE(IsBinaryLabels(ok));
}

TEST(LogregTest, ZeroEpochsGivesHalf) {
  Matrix x = *Matrix::FromRows({{1}, {2}});
  const std::vector<double> y = {0, 1};
  LinearModel m = *TrainLogreg(x, y, LogregOptions{0.1, 0});
  for (double v : PredictProba(m, x)) EXPECT_DOUBLE_EQ(v, 0.5);
}

}  // namespace
}  // namespace hpca
