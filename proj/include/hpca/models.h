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

// Downstream models trained on the reduced data.

#ifndef HPCA_MODELS_H_
#define HPCA_MODELS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "hpca/linalg.h"

namespace hpca {

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
};

// Least squares with intercept through the normal equations. `ridge` is added
// to the feature block of the diagonal so collinear features stay solvable;
// the intercept is not penalized.
absl::StatusOr<LinearModel> TrainLinreg(const Matrix& x,
                                        std::span<const double> y,
                                        double ridge = 1e-8);

// x w + b per row.
std::vector<double> PredictLinear(const LinearModel& model, const Matrix& x);

struct LogregOptions {
  double learning_rate = 0.1;
  int epochs = 500;
};

// Full-batch gradient descent on the mean log loss from zero weights. Labels
// must be 0 or 1.
absl::StatusOr<LinearModel> TrainLogreg(const Matrix& x,
                                        std::span<const double> y,
                                        const LogregOptions& options = {});

// sigmoid(x w + b) per row.
std::vector<double> PredictProba(const LinearModel& model, const Matrix& x);

bool IsBinaryLabels(std::span<const double> y);

}  // namespace hpca

#endif  // HPCA_MODELS_H_
