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

// Tabular data ingestion and horizontal partitioning.

#ifndef HPCA_DATASET_H_
#define HPCA_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "hpca/linalg.h"

namespace hpca {

struct Dataset {
  Matrix features;
  std::vector<double> labels;  // empty when the data has no label column
  std::vector<std::string> feature_names;
  std::string label_name;

  bool has_labels() const { return !labels.empty(); }
  size_t rows() const { return features.rows(); }
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  // Column to split out as the label: a header name, or a 0-based index when
  // the file has no header.
  std::optional<std::string> label_column;
};

// RFC 4180 fields (quotes, doubled quotes, quoted delimiters and newlines).
// Blank lines are skipped. Every non-label cell must parse as a finite number.
absl::StatusOr<Dataset> ParseCsv(std::string_view text,
                                 const CsvOptions& options);
absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                const CsvOptions& options);

// Matrix as CSV with an optional header line.
std::string FormatCsv(const Matrix& m,
                      std::span<const std::string> header = {},
                      char delimiter = ',');

Dataset SelectDatasetRows(const Dataset& ds, std::span<const size_t> rows);

// A random permutation of [0, n) from a labelled stream of `seed`.
std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed,
                                    std::string_view label);

struct Partition {
  Dataset data;
  std::vector<size_t> source_rows;  // row indices into the input dataset
};

// Shuffles the rows and deals them into `parts` contiguous slices whose
// sizes differ by at most one; the first rows % parts slices get the extra
// row. Labels follow their rows.
absl::StatusOr<std::vector<Partition>> PartitionHorizontal(const Dataset& ds,
                                                           int parts,
                                                           uint64_t seed);

}  // namespace hpca

#endif  // HPCA_DATASET_H_
