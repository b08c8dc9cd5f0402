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

#include "hpca/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "absl/strings/str_format.h"

namespace hpca {

absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d scores for %d labels", scores.size(), labels.size()));
  }
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0;
  size_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // average of i+1..j
    for (size_t t = i; t < j; ++t) {
      const double y = labels[order[t]];
      if (y != 0.0 && y != 1.0) {
        return absl::InvalidArgumentError("AUC needs labels in {0, 1}");
      }
      if (y == 1.0) {
        positive_rank_sum += rank;
        ++positives;
      }
    }
    i = j;
  }
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    return absl::InvalidArgumentError("AUC is undefined with a single class");
  }
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1) / 2) /
         (p * static_cast<double>(negatives));
}

absl::StatusOr<double> Rmse(std::span<const double> predictions,
                            std::span<const double> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "RMSE needs equal non-empty inputs, got %d and %d",
        predictions.size(), targets.size()));
  }
  double sum = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(predictions.size()));
}

}  // namespace hpca
