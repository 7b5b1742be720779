// Copyright 2026 The cohortig Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COHORTIG_DATASET_HPP_
#define COHORTIG_DATASET_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cohortig/core.hpp"

namespace cohortig {

enum class ColumnType { Numeric, Categorical };

std::string_view column_type_name(ColumnType type);

// Feature matrix plus response vector. Categorical columns are stored as
// their integer codes (first-appearance order of the distinct strings), with
// the strings kept in `levels`. Immutable once built by the loader.
struct Dataset {
  Matrix features;  // n x d
  Vector responses;
  std::vector<std::string> column_names;
  std::vector<ColumnType> column_types;
  std::vector<std::vector<std::string>> levels;

  Index n() const { return features.rows(); }
  Index d() const { return features.cols(); }

  /// Throws Error if the shape invariants do not hold.
  void validate() const;

  /// Exact equality of shape, values, names, types and levels.
  friend bool operator==(const Dataset& a, const Dataset& b);
};

struct ResponseMode {
  enum class Kind { Raw, Residual, AbsResidual, SquaredResidual };

  Kind kind = Kind::Raw;
  std::string prediction_column;

  static ResponseMode raw() { return {}; }
  static ResponseMode residual(std::string column) {
    return {Kind::Residual, std::move(column)};
  }
  static ResponseMode abs_residual(std::string column) {
    return {Kind::AbsResidual, std::move(column)};
  }
  static ResponseMode squared_residual(std::string column) {
    return {Kind::SquaredResidual, std::move(column)};
  }

  /// Accepts "raw", "residual", "abs-residual" and "squared-residual".
  static ResponseMode parse(std::string_view mode, std::string prediction_column);

  bool uses_prediction() const { return kind != Kind::Raw; }
  /// g(y, pred) for the residual modes; `y` for Raw.
  double apply(double y, double prediction) const;
};

std::string to_string(const ResponseMode& mode);

struct LoadOptions {
  std::string response_column;
  ResponseMode response_mode;
  std::map<std::string, ColumnType> schema_overrides;
};

/// Reads a comma-separated file with a header row. The response column and,
/// for residual modes, the prediction column are removed from the features.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options);
Dataset parse_dataset(std::istream& in, const LoadOptions& options);

/// Writes `ds` back out as CSV with the responses in a trailing column named
/// `response_name`. Numeric values use round-trip precision.
void write_dataset_csv(std::ostream& out, const Dataset& ds,
                       std::string_view response_name = "response");

/// r_j = max_i x_ij - min_i x_ij for numeric columns, 0 for categorical ones.
Vector feature_ranges(const Dataset& ds);

/// Plain-text report: n, d, one line per column with type and range.
std::string summarize(const Dataset& ds);

// --- similarity rules ------------------------------------------------------

struct Equality {
  friend bool operator==(const Equality&, const Equality&) = default;
};
struct RelativeRange {
  double delta = 0.1;
  friend bool operator==(const RelativeRange&, const RelativeRange&) = default;
};
struct AbsoluteRange {
  double width = 0.0;
  friend bool operator==(const AbsoluteRange&, const AbsoluteRange&) = default;
};

using SimilarityRule = std::variant<Equality, RelativeRange, AbsoluteRange>;

/// Parses "equality", "relative:<delta>" or "absolute:<width>".
SimilarityRule parse_similarity_rule(std::string_view text);
std::string to_string(const SimilarityRule& rule);

struct SimilaritySpec {
  std::vector<SimilarityRule> rules;  // one per feature column

  /// `numeric_default` for numeric columns, Equality for categorical ones.
  static SimilaritySpec with_default(const Dataset& ds,
                                     SimilarityRule numeric_default = RelativeRange{0.1});

  void validate(const Dataset& ds) const;
};

}  // namespace cohortig

#endif  // COHORTIG_DATASET_HPP_
