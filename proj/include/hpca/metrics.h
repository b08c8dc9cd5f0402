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

#ifndef HPCA_METRICS_H_
#define HPCA_METRICS_H_

#include <span>

#include "absl/status/statusor.h"

namespace hpca {

// Area under the ROC curve from the rank statistic. Tied scores get their
// average rank, so a tie between a positive and a negative counts 1/2.
absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const double> labels);

absl::StatusOr<double> Rmse(std::span<const double> predictions,
                            std::span<const double> targets);

}  // namespace hpca

#endif  // HPCA_METRICS_H_
