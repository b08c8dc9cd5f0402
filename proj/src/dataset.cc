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

#include "hpca/dataset.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "hpca/prg.h"

namespace hpca {
namespace {

struct Record {
  size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

absl::StatusOr<std::vector<Record>> SplitRecords(std::string_view text,
                                                 char delimiter) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool record_has_content = false;
  size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(field_quoted ? field
                                          : std::string(absl::StripAsciiWhitespace(field)));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content) {
      end_field();
      records.push_back(std::move(current));
    }
    current = Record{};
    current.line = line + 1;
    field.clear();
    field_quoted = false;
    record_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      field_quoted = true;
      record_has_content = true;
    } else if (c == delimiter) {
      end_field();
      record_has_content = true;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else if (c != '\r') {
      field.push_back(c);
      if (c != ' ' && c != '\t') record_has_content = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        absl::StrFormat("line %d: unterminated quoted field", current.line));
  }
  end_record();
  return records;
}

}  // namespace

absl::StatusOr<Dataset> ParseCsv(std::string_view text,
                                 const CsvOptions& options) {
  absl::StatusOr<std::vector<Record>> records =
      SplitRecords(text, options.delimiter);
  if (!records.ok()) return records.status();
  if (records->empty()) return absl::InvalidArgumentError("empty CSV input");

  const size_t width = records->front().fields.size();
  std::vector<std::string> names;
  size_t first_data = 0;
  if (options.header) {
    names = records->front().fields;
    first_data = 1;
  } else {
    for (size_t c = 0; c < width; ++c) names.push_back(absl::StrFormat("x%d", c));
  }

  std::optional<size_t> label_index;
  if (options.label_column.has_value()) {
    const std::string& want = *options.label_column;
    for (size_t c = 0; c < names.size(); ++c) {
      if (names[c] == want) label_index = c;
    }
    size_t index = 0;
    if (!label_index.has_value() && !options.header &&
        absl::SimpleAtoi(want, &index) && index < width) {
      label_index = index;
    }
    if (!label_index.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("label column '%s' not found", want));
    }
  }
  const size_t feature_count = width - (label_index.has_value() ? 1 : 0);
  if (feature_count == 0) {
    return absl::InvalidArgumentError("CSV has no feature columns");
  }

  Dataset ds;
  for (size_t c = 0; c < width; ++c) {
    if (label_index == c) {
      ds.label_name = names[c];
    } else {
      ds.feature_names.push_back(names[c]);
    }
  }
  std::vector<double> values;
  for (size_t r = first_data; r < records->size(); ++r) {
    const Record& rec = (*records)[r];
    if (rec.fields.size() != width) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: ragged row with %d fields, expected %d", rec.line,
          rec.fields.size(), width));
    }
    for (size_t c = 0; c < width; ++c) {
      double v = 0;
      if (!absl::SimpleAtod(rec.fields[c], &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d, column %d ('%s'): cannot parse '%s' as a number",
            rec.line, c + 1, names[c], rec.fields[c]));
      }
      if (label_index == c) {
        ds.labels.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  const size_t rows = records->size() - first_data;
  if (rows == 0) return absl::InvalidArgumentError("CSV has no data rows");
  absl::StatusOr<Matrix> features =
      Matrix::Create(rows, feature_count, std::move(values));
  if (!features.ok()) return features.status();
  ds.features = *std::move(features);
  return ds;
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<Dataset> ds = ParseCsv(buffer.str(), options);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrFormat("%s: %s", path, ds.status().message()));
  }
  return ds;
}

std::string FormatCsv(const Matrix& m, std::span<const std::string> header,
                      char delimiter) {
  std::string out;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out.push_back(delimiter);
    out += header[c];
  }
  if (!header.empty()) out.push_back('\n');
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(delimiter);
      out += absl::StrFormat("%.17g", m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

Dataset SelectDatasetRows(const Dataset& ds, std::span<const size_t> rows) {
  Dataset out;
  out.features = SelectRows(ds.features, rows);
  out.feature_names = ds.feature_names;
  out.label_name = ds.label_name;
  if (ds.has_labels()) {
    for (size_t r : rows) out.labels.push_back(ds.labels[r]);
  }
  return out;
}

std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed,
                                    std::string_view label) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  Prg prg = Prg::FromSeed(seed, label);
  for (size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[prg.UniformU64(i)]);
  }
  return idx;
}

absl::StatusOr<std::vector<Partition>> PartitionHorizontal(const Dataset& ds,
                                                           int parts,
                                                           uint64_t seed) {
  if (parts < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least 2 parts, got %d", parts));
  }
  const size_t n = ds.rows();
  if (n < static_cast<size_t>(parts)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d rows cannot fill %d parts", n, parts));
  }
  const std::vector<size_t> order = ShuffledIndices(n, seed, "partition");
  const size_t base = n / parts;
  const size_t extra = n % parts;
  std::vector<Partition> out;
  size_t next = 0;
  for (int p = 0; p < parts; ++p) {
    const size_t size = base + (static_cast<size_t>(p) < extra ? 1 : 0);
    Partition part;
    part.source_rows.assign(order.begin() + next, order.begin() + next + size);
    part.data = SelectDatasetRows(ds, part.source_rows);
    next += size;
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace hpca
