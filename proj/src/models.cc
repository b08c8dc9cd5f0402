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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace hpca {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

absl::Status CheckShapes(const Matrix& x, std::span<const double> y) {
  if (x.empty()) return absl::InvalidArgumentError("no training rows");
  if (y.size() != x.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d labels for %d rows", y.size(), x.rows()));
  }
  return absl::OkStatus();
}

}  // namespace

bool IsBinaryLabels(std::span<const double> y) {
  for (double v : y) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

absl::StatusOr<LinearModel> TrainLinreg(const Matrix& x,
                                        std::span<const double> y,
                                        double ridge) {
  if (absl::Status s = CheckShapes(x, y); !s.ok()) return s;
  const size_t d = x.cols();
  if (x.rows() < d + 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "linear regression needs at least %d rows, got %d", d + 1, x.rows()));
  }
  // Normal equations over [x, 1].
  Matrix a(d + 1, d + 1);
  std::vector<double> b(d + 1, 0.0);
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t i = 0; i <= d; ++i) {
      const double xi = i < d ? x(r, i) : 1.0;
      b[i] += xi * y[r];
      for (size_t j = i; j <= d; ++j) {
        a(i, j) += xi * (j < d ? x(r, j) : 1.0);
      }
    }
  }
  for (size_t i = 0; i <= d; ++i) {
    for (size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
    if (i < d) a(i, i) += ridge;
  }
  absl::StatusOr<std::vector<double>> w = CholeskySolve(a, b);
  if (!w.ok()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "singular least-squares system: %s", w.status().message()));
  }
  LinearModel model;
  model.weights.assign(w->begin(), w->begin() + d);
  model.intercept = (*w)[d];
  return model;
}

std::vector<double> PredictLinear(const LinearModel& model, const Matrix& x) {
  std::vector<double> out(x.rows(), model.intercept);
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t c = 0; c < x.cols(); ++c) out[r] += x(r, c) * model.weights[c];
  }
  return out;
}

absl::StatusOr<LinearModel> TrainLogreg(const Matrix& x,
                                        std::span<const double> y,
                                        const LogregOptions& options) {
  if (absl::Status s = CheckShapes(x, y); !s.ok()) return s;
  if (!IsBinaryLabels(y)) {
    return absl::InvalidArgumentError(
        "logistic regression needs labels in {0, 1}");
  }
  const size_t n = x.rows();
  const size_t d = x.cols();
  LinearModel model;
  model.weights.assign(d, 0.0);
  std::vector<double> grad(d);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    const std::vector<double> p = PredictProba(model, x);
    for (size_t r = 0; r < n; ++r) {
      const double err = p[r] - y[r];
      for (size_t c = 0; c < d; ++c) grad[c] += err * x(r, c);
      grad_b += err;
    }
    const double step = options.learning_rate / static_cast<double>(n);
    for (size_t c = 0; c < d; ++c) model.weights[c] -= step * grad[c];
    model.intercept -= step * grad_b;
  }
  return model;
}

std::vector<double> PredictProba(const LinearModel& model, const Matrix& x) {
  std::vector<double> z = PredictLinear(model, x);
  for (double& v : z) v = Sigmoid(v);
  return z;
}

}  // namespace hpca
