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

#include "hpca/evaluation.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/time/clock.h"
#include "hpca/linalg.h"
#include "hpca/metrics.h"
#include "hpca/privacy.h"
#include "hpca/protocol.h"

namespace hpca {
namespace {

// Reduced training and test data for one fold, with labels in row order.
struct Transformed {
  Matrix z_train;
  std::vector<double> y_train;
  Matrix z_test;
  std::vector<double> y_test;
  std::vector<size_t> fit_rows;  // indices into the training set
  size_t violations = 0;
};

absl::StatusOr<Matrix> ApplyTransform(const Matrix& x,
                                      std::span<const double> mean,
                                      const Matrix& transfer) {
  absl::StatusOr<Matrix> centered = CenterColumns(x, mean);
  if (!centered.ok()) return centered.status();
  return Project(*centered, transfer);
}

std::vector<size_t> AllRows(size_t n) {
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

absl::StatusOr<Transformed> FitCentralized(const Dataset& train,
                                           const Dataset& test, size_t k) {
  absl::StatusOr<PcaResult> pca = CentralizedPca(train.features, k);
  if (!pca.ok()) return pca.status();
  Transformed t;
  t.z_train = pca->reduced;
  t.y_train = train.labels;
  absl::StatusOr<Matrix> z = ApplyTransform(test.features, pca->mean,
                                            pca->transfer);
  if (!z.ok()) return z.status();
  t.z_test = *std::move(z);
  t.y_test = test.labels;
  t.fit_rows = AllRows(train.rows());
  return t;
}

// Each provider fits PCA on its own rows only. Test rows are dealt to the
// providers the same way and each provider reduces its share of them with
// its own transform.
absl::StatusOr<Transformed> FitSeparate(const Dataset& train,
                                        const Dataset& test, int parties,
                                        size_t k, uint64_t seed) {
  absl::StatusOr<std::vector<Partition>> train_parts =
      PartitionHorizontal(train, parties, seed);
  if (!train_parts.ok()) return train_parts.status();
  absl::StatusOr<std::vector<Partition>> test_parts =
      PartitionHorizontal(test, parties, seed ^ 0x7465737400000000ull);
  if (!test_parts.ok()) return test_parts.status();
  std::vector<Matrix> z_train, z_test;
  Transformed t;
  for (int i = 0; i < parties; ++i) {
    const Partition& tr = (*train_parts)[i];
    const Partition& te = (*test_parts)[i];
    absl::StatusOr<PcaResult> pca = CentralizedPca(tr.data.features, k);
    if (!pca.ok()) {
      return absl::Status(pca.status().code(),
                          absl::StrFormat("provider %d: %s", i,
                                          pca.status().message()));
    }
    z_train.push_back(pca->reduced);
    absl::StatusOr<Matrix> z =
        ApplyTransform(te.data.features, pca->mean, pca->transfer);
    if (!z.ok()) return z.status();
    z_test.push_back(*std::move(z));
    t.y_train.insert(t.y_train.end(), tr.data.labels.begin(),
                     tr.data.labels.end());
    t.y_test.insert(t.y_test.end(), te.data.labels.begin(),
                    te.data.labels.end());
    t.fit_rows.insert(t.fit_rows.end(), tr.source_rows.begin(),
                      tr.source_rows.end());
  }
  absl::StatusOr<Matrix> zt = VStack(z_train);
  if (!zt.ok()) return zt.status();
  absl::StatusOr<Matrix> ze = VStack(z_test);
  if (!ze.ok()) return ze.status();
  t.z_train = *std::move(zt);
  t.z_test = *std::move(ze);
  return t;
}

absl::StatusOr<Transformed> FitProtocol(const Dataset& train,
                                        const Dataset& test,
                                        const CompareOptions& options,
                                        Method method, uint64_t seed) {
  absl::StatusOr<std::vector<Partition>> parts =
      PartitionHorizontal(train, options.parties, seed);
  if (!parts.ok()) return parts.status();
  SessionConfig cfg = options.session;
  cfg.parties = options.parties;
  cfg.k = options.k;
  cfg.method = method;
  std::vector<Matrix> data;
  Transformed t;
  for (const Partition& p : *parts) {
    data.push_back(p.data.features);
    t.y_train.insert(t.y_train.end(), p.data.labels.begin(),
                     p.data.labels.end());
    t.fit_rows.insert(t.fit_rows.end(), p.source_rows.begin(),
                      p.source_rows.end());
  }
  absl::StatusOr<ProtocolResult> result = RunSimulated(cfg, data);
  if (!result.ok()) return result.status();
  t.z_train = result->reduced;
  absl::StatusOr<Matrix> z =
      ApplyTransform(test.features, result->mean, result->transfer);
  if (!z.ok()) return z.status();
  t.z_test = *std::move(z);
  t.y_test = test.labels;
  t.violations = AssertPrivacy(result->transcript, cfg).size();
  return t;
}

// Scales columns to unit variance around the training mean, in place.
void Standardize(Dataset& train, Dataset& test) {
  const size_t n = train.rows();
  const size_t d = train.features.cols();
  const std::vector<double> sums = ColumnSums(train.features);
  for (size_t c = 0; c < d; ++c) {
    const double mean = sums[c] / static_cast<double>(n);
    double ss = 0;
    for (size_t r = 0; r < n; ++r) {
      const double e = train.features(r, c) - mean;
      ss += e * e;
    }
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd == 0.0) sd = 1.0;
    for (Matrix* m : {&train.features, &test.features}) {
      for (size_t r = 0; r < m->rows(); ++r) {
        (*m)(r, c) = ((*m)(r, c) - mean) / sd;
      }
    }
  }
}

absl::StatusOr<double> Downstream(const Transformed& t, Task task,
                                  const LogregOptions& logreg) {
  if (task == Task::kRegression) {
    absl::StatusOr<LinearModel> model = TrainLinreg(t.z_train, t.y_train);
    if (!model.ok()) return model.status();
    return Rmse(PredictLinear(*model, t.z_test), t.y_test);
  }
  absl::StatusOr<LinearModel> model = TrainLogreg(t.z_train, t.y_train, logreg);
  if (!model.ok()) return model.status();
  return Auc(PredictProba(*model, t.z_test), t.y_test);
}

}  // namespace

std::string_view EvalMethodName(EvalMethod method) {
  switch (method) {
    case EvalMethod::kCentralized:
      return "centralized";
    case EvalMethod::kSeparate:
      return "separate";
    case EvalMethod::kPppcaHe:
      return "pppca-he";
    case EvalMethod::kPppcaSs:
      return "pppca-ss";
  }
  return "unknown";
}

absl::StatusOr<std::vector<EvalMethod>> ParseEvalMethods(std::string_view text) {
  const std::vector<EvalMethod> all = {
      EvalMethod::kCentralized, EvalMethod::kSeparate, EvalMethod::kPppcaHe,
      EvalMethod::kPppcaSs};
  if (text == "all") return all;
  std::vector<EvalMethod> out;
  for (absl::string_view piece :
       absl::StrSplit(absl::string_view(text.data(), text.size()), ',')) {
    const std::string_view name(piece.data(), piece.size());
    bool found = false;
    for (EvalMethod m : all) {
      if (EvalMethodName(m) == name) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        found = true;
      }
    }
    if (!found) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unknown method '%s' (expected centralized, separate, pppca-he, "
          "pppca-ss or all)",
          std::string(name)));
    }
  }
  if (out.empty()) return absl::InvalidArgumentError("no methods given");
  return out;
}

absl::StatusOr<std::vector<RunReport>> Compare(const Dataset& ds,
                                               const CompareOptions& options) {
  if (!ds.has_labels()) {
    return absl::InvalidArgumentError("comparison needs a label column");
  }
  if (options.folds < 2 || ds.rows() < static_cast<size_t>(options.folds)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot split %d rows into %d folds", ds.rows(), options.folds));
  }
  if (options.methods.empty()) {
    return absl::InvalidArgumentError("no methods given");
  }
  const Task task = options.task.value_or(
      IsBinaryLabels(ds.labels) ? Task::kClassification : Task::kRegression);
  if (task == Task::kClassification && !IsBinaryLabels(ds.labels)) {
    return absl::InvalidArgumentError("classification needs labels in {0, 1}");
  }

  std::vector<RunReport> reports;
  for (EvalMethod m : options.methods) {
    RunReport r;
    r.method = m;
    r.k = options.k;
    r.metric = task == Task::kRegression ? "rmse" : "auc";
    r.phase_seconds = {{"transform", 0.0}, {"model", 0.0}};
    reports.push_back(std::move(r));
  }

  const size_t n = ds.rows();
  const size_t folds = static_cast<size_t>(options.folds);
  const std::vector<size_t> order = ShuffledIndices(n, options.seed, "folds");
  size_t start = 0;
  for (size_t f = 0; f < folds; ++f) {
    const size_t size = n / folds + (f < n % folds ? 1 : 0);
    std::vector<size_t> test_rows(order.begin() + start,
                                  order.begin() + start + size);
    std::vector<size_t> train_rows(order.begin(), order.begin() + start);
    train_rows.insert(train_rows.end(), order.begin() + start + size,
                      order.end());
    start += size;

    Dataset train = SelectDatasetRows(ds, train_rows);
    Dataset test = SelectDatasetRows(ds, test_rows);
    if (options.standardize) Standardize(train, test);
    const uint64_t fold_seed = options.seed * 1000003ull + f;

    for (RunReport& report : reports) {
      const absl::Time t0 = absl::Now();
      absl::StatusOr<Transformed> t;
      switch (report.method) {
        case EvalMethod::kCentralized:
          t = FitCentralized(train, test, options.k);
          break;
        case EvalMethod::kSeparate:
          t = FitSeparate(train, test, options.parties, options.k, fold_seed);
          break;
        case EvalMethod::kPppcaHe:
          t = FitProtocol(train, test, options, Method::kHe, fold_seed);
          break;
        case EvalMethod::kPppcaSs:
          t = FitProtocol(train, test, options, Method::kSs, fold_seed);
          break;
      }
      if (!t.ok()) {
        return absl::Status(
            t.status().code(),
            absl::StrFormat("%s, fold %d: %s",
                            std::string(EvalMethodName(report.method)), f + 1,
                            t.status().message()));
      }
      const absl::Time t1 = absl::Now();
      absl::StatusOr<double> metric = Downstream(*t, task, options.logreg);
      if (!metric.ok()) {
        return absl::Status(
            metric.status().code(),
            absl::StrFormat("%s, fold %d: %s",
                            std::string(EvalMethodName(report.method)), f + 1,
                            metric.status().message()));
      }
      report.phase_seconds["transform"] += absl::ToDoubleSeconds(t1 - t0);
      report.phase_seconds["model"] += absl::ToDoubleSeconds(absl::Now() - t1);
      report.fold_metrics.push_back(*metric);
      report.privacy_violations += t->violations;
      std::vector<size_t> fit;
      for (size_t i : t->fit_rows) fit.push_back(train_rows[i]);
      report.fold_fit_rows.push_back(std::move(fit));
      report.fold_test_rows.push_back(test_rows);
    }
  }
  for (RunReport& report : reports) {
    double sum = 0;
    for (double v : report.fold_metrics) sum += v;
    report.mean_metric = sum / static_cast<double>(report.fold_metrics.size());
  }
  return reports;
}

std::string FormatReport(const std::vector<RunReport>& reports,
                         bool with_timings) {
  size_t folds = 0;
  for (const RunReport& r : reports) folds = std::max(folds, r.fold_metrics.size());
  std::string out = absl::StrFormat("%-12s %3s %-6s", "method", "k", "metric");
  for (size_t f = 0; f < folds; ++f) {
    out += absl::StrFormat(" %9s", absl::StrCat("fold", f + 1));
  }
  out += absl::StrFormat(" %9s", "mean");
  if (with_timings) out += absl::StrFormat(" %11s %9s", "transform_s", "model_s");
  out += "\n";
  for (const RunReport& r : reports) {
    out += absl::StrFormat("%-12s %3d %-6s", std::string(EvalMethodName(r.method)),
                           r.k, r.metric);
    for (double v : r.fold_metrics) out += absl::StrFormat(" %9.6f", v);
    out += absl::StrFormat(" %9.6f", r.mean_metric);
    if (with_timings) {
      out += absl::StrFormat(" %11.3f %9.3f", r.phase_seconds.at("transform"),
                             r.phase_seconds.at("model"));
    }
    out += "\n";
  }
  return out;
}

std::string FormatReportCsv(const std::vector<RunReport>& reports) {
  size_t folds = 0;
  for (const RunReport& r : reports) folds = std::max(folds, r.fold_metrics.size());
  std::string out = "method,k,metric";
  for (size_t f = 0; f < folds; ++f) absl::StrAppend(&out, ",fold", f + 1);
  out += ",mean\n";
  for (const RunReport& r : reports) {
    out += absl::StrFormat("%s,%d,%s", std::string(EvalMethodName(r.method)),
                           r.k, r.metric);
    for (double v : r.fold_metrics) out += absl::StrFormat(",%.17g", v);
    out += absl::StrFormat(",%.17g\n", r.mean_metric);
  }
  return out;
}

std::map<MessageType, size_t> ExpectedMessageCounts(Method method,
                                                    int parties) {
  const size_t m = static_cast<size_t>(parties);
  std::map<MessageType, size_t> c;
  c[MessageType::kSampleCount] = m * m;
  c[MessageType::kPlainMean] = m;
  c[MessageType::kTransferMatrix] = m;
  c[MessageType::kReducedRows] = m;
  if (method == Method::kHe) {
    c[MessageType::kPublicKey] = m;
    c[MessageType::kEncryptedSums] = m - 1;
    c[MessageType::kEncryptedSumAggregate] = 1;
    c[MessageType::kEncryptedCov] = m - 1;
    c[MessageType::kEncryptedCovAggregate] = 1;
  } else {
    c[MessageType::kShareBundle] = 2 * m * (m - 1);
    c[MessageType::kLocalShareSum] = 2 * m;
  }
  return c;
}

absl::StatusOr<std::vector<BenchRow>> RunBench(const Dataset& ds,
                                               const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (int m : options.parties) {
    absl::StatusOr<std::vector<Partition>> parts =
        PartitionHorizontal(ds, m, options.seed);
    if (!parts.ok()) return parts.status();
    std::vector<Matrix> data;
    for (const Partition& p : *parts) data.push_back(p.data.features);
    SessionConfig cfg = options.session;
    cfg.parties = m;
    cfg.k = options.k;
    const absl::Time t0 = absl::Now();
    absl::StatusOr<ProtocolResult> result = RunSimulated(cfg, data);
    if (!result.ok()) return result.status();
    BenchRow row;
    row.parties = m;
    row.method = cfg.method;
    row.seconds = absl::ToDoubleSeconds(absl::Now() - t0);
    row.counts = result->transcript.CountByType();
    row.messages = result->transcript.messages.size();
    row.payload_bytes = result->transcript.TotalPayloadBytes();
    row.counts_match = row.counts == ExpectedMessageCounts(cfg.method, m);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string FormatBench(const std::vector<BenchRow>& rows) {
  std::string out = absl::StrFormat("%7s %6s %9s %8s %13s %6s  %s\n", "parties",
                                    "method", "seconds", "messages",
                                    "payload_bytes", "counts", "by_type");
  for (const BenchRow& r : rows) {
    std::vector<std::string> parts;
    for (const auto& [type, count] : r.counts) {
      parts.push_back(
          absl::StrFormat("%s=%d", std::string(MessageTypeName(type)), count));
    }
    out += absl::StrFormat("%7d %6s %9.3f %8d %13d %6s  %s\n", r.parties,
                           std::string(MethodName(r.method)), r.seconds,
                           r.messages, r.payload_bytes,
                           r.counts_match ? "ok" : "MISMATCH",
                           absl::StrJoin(parts, " "));
  }
  return out;
}

}  // namespace hpca
