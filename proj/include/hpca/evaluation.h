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

// Evaluation harness: cross-validated comparison of centralized PCA,
// per-provider ("separate") PCA and the joint protocol, plus the party-count
// benchmark.

#ifndef HPCA_EVALUATION_H_
#define HPCA_EVALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "hpca/dataset.h"
#include "hpca/message.h"
#include "hpca/models.h"
#include "hpca/session.h"

namespace hpca {

enum class EvalMethod { kCentralized, kSeparate, kPppcaHe, kPppcaSs };

std::string_view EvalMethodName(EvalMethod method);
// Comma-separated names, or "all" for the four methods in canonical order.
absl::StatusOr<std::vector<EvalMethod>> ParseEvalMethods(std::string_view text);

enum class Task { kRegression, kClassification };

struct CompareOptions {
  int parties = 2;
  size_t k = 2;
  std::vector<EvalMethod> methods = {EvalMethod::kCentralized};
  uint64_t seed = 1;
  int folds = 5;
  // Defaults to classification for 0/1 labels and regression otherwise.
  std::optional<Task> task;
  // Scale features to unit variance with training-fold statistics.
  bool standardize = false;
  // Template for the protocol runs; parties, k, method and seed are
  // overwritten per run.
  SessionConfig session;
  LogregOptions logreg;
};

struct RunReport {
  EvalMethod method = EvalMethod::kCentralized;
  size_t k = 0;
  std::string metric;  // "rmse" or "auc"
  std::vector<double> fold_metrics;
  double mean_metric = 0.0;
  // Seconds per phase summed over folds: "transform" and "model".
  std::map<std::string, double> phase_seconds;
  // Dataset row indices that fitted the transform, and the held-out rows,
  // per fold.
  std::vector<std::vector<size_t>> fold_fit_rows;
  std::vector<std::vector<size_t>> fold_test_rows;
  // Privacy-policy violations over all protocol transcripts of this method.
  size_t privacy_violations = 0;
};

absl::StatusOr<std::vector<RunReport>> Compare(const Dataset& ds,
                                               const CompareOptions& options);

// Aligned text table. Timings are left out unless asked for, which keeps the
// output reproducible byte for byte.
std::string FormatReport(const std::vector<RunReport>& reports,
                         bool with_timings = false);
std::string FormatReportCsv(const std::vector<RunReport>& reports);

struct BenchOptions {
  std::vector<int> parties = {2, 3, 4};
  size_t k = 4;
  uint64_t seed = 1;
  SessionConfig session;  // method and encoding settings
};

struct BenchRow {
  int parties = 0;
  Method method = Method::kSs;
  double seconds = 0.0;
  std::map<MessageType, size_t> counts;
  size_t messages = 0;
  size_t payload_bytes = 0;
  bool counts_match = false;  // counts equal ExpectedMessageCounts
};

// Message counts the protocol generates for M providers.
std::map<MessageType, size_t> ExpectedMessageCounts(Method method, int parties);

absl::StatusOr<std::vector<BenchRow>> RunBench(const Dataset& ds,
                                               const BenchOptions& options);
std::string FormatBench(const std::vector<BenchRow>& rows);

}  // namespace hpca

#endif  // HPCA_EVALUATION_H_
