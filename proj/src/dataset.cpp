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

#include "cohortig/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cohortig {
namespace {

using Record = std::vector<std::string>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// RFC 4180 style: comma delimiter, double-quote quoting with "" escapes,
// LF or CRLF line endings. Blank lines are skipped.
std::vector<Record> read_records(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (current.size() == 1 && current.front().empty()) {
      current.clear();
      return;
    }
    records.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !trim(field).empty()) {
          throw Error(ErrorKind::MalformedCsv,
                      "unexpected quote inside field on line " + std::to_string(line));
        }
        field.clear();
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_field();
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::MalformedCsv, "unterminated quoted field");
  if (field_started || !field.empty() || !current.empty()) {
    end_field();
    end_record();
  }
  return records;
}

std::string quote_if_needed(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim(s) == s) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view column_type_name(ColumnType type) {
  return type == ColumnType::Numeric ? "numeric" : "categorical";
}

void Dataset::validate() const {
  if (n() < 1) throw Error(ErrorKind::EmptyDataset, "dataset has no rows");
  if (d() < 1) throw Error(ErrorKind::EmptyDataset, "dataset has no feature columns");
  const auto d_size = static_cast<std::size_t>(d());
  if (responses.size() != n() || column_names.size() != d_size ||
      column_types.size() != d_size || levels.size() != d_size) {
    throw Error(ErrorKind::DimensionMismatch, "dataset fields have inconsistent sizes");
  }
  if (!features.allFinite() || !responses.allFinite()) {
    throw Error(ErrorKind::MissingValue, "dataset contains non-finite values");
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.features.rows() == b.features.rows() && a.features.cols() == b.features.cols() &&
         a.features == b.features && a.responses.size() == b.responses.size() &&
         a.responses == b.responses && a.column_names == b.column_names &&
         a.column_types == b.column_types && a.levels == b.levels;
}

ResponseMode ResponseMode::parse(std::string_view mode, std::string prediction_column) {
  if (mode == "raw") return raw();
  ResponseMode out;
  if (mode == "residual") {
    out.kind = Kind::Residual;
  } else if (mode == "abs-residual") {
    out.kind = Kind::AbsResidual;
  } else if (mode == "squared-residual") {
    out.kind = Kind::SquaredResidual;
  } else {
    throw Error(ErrorKind::Config, "unknown response mode '" + std::string(mode) + "'");
  }
  if (prediction_column.empty()) {
    throw Error(ErrorKind::Config,
                "response mode '" + std::string(mode) + "' needs a prediction column");
  }
  out.prediction_column = std::move(prediction_column);
  return out;
}

double ResponseMode::apply(double y, double prediction) const {
  switch (kind) {
    case Kind::Raw: return y;
    case Kind::Residual: return y - prediction;
    case Kind::AbsResidual: return std::abs(y - prediction);
    case Kind::SquaredResidual: {
      const double r = y - prediction;
      return r * r;
    }
  }
  return y;
}

std::string to_string(const ResponseMode& mode) {
  switch (mode.kind) {
    case ResponseMode::Kind::Raw: return "raw";
    case ResponseMode::Kind::Residual: return "residual(" + mode.prediction_column + ")";
    case ResponseMode::Kind::AbsResidual:
      return "abs-residual(" + mode.prediction_column + ")";
    case ResponseMode::Kind::SquaredResidual:
      return "squared-residual(" + mode.prediction_column + ")";
  }
  return "raw";
}

Dataset parse_dataset(std::istream& in, const LoadOptions& options) {
  const std::vector<Record> records = read_records(in);
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "CSV input is empty");

  Record header = records.front();
  for (auto& name : header) name = std::string(trim(name));
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column_of.emplace(header[c], c).second) {
      throw Error(ErrorKind::MalformedCsv, "duplicate column name '" + header[c] + "'");
    }
  }
  const std::size_t rows = records.size() - 1;
  if (rows == 0) throw Error(ErrorKind::EmptyDataset, "CSV has a header but no data rows");

  auto find_column = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) {
      throw Error(ErrorKind::MissingColumn, "column '" + name + "' not found in header");
    }
    return it->second;
  };
  const std::size_t response_col = find_column(options.response_column);
  std::optional<std::size_t> prediction_col;
  if (options.response_mode.uses_prediction()) {
    prediction_col = find_column(options.response_mode.prediction_column);
  }
  for (const auto& [name, type] : options.schema_overrides) {
    (void)type;
    find_column(name);
  }

  for (std::size_t r = 0; r < rows; ++r) {
    const Record& rec = records[r + 1];
    if (rec.size() != header.size()) {
      throw Error(ErrorKind::MalformedCsv,
                  "row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < rec.size(); ++c) {
      if (trim(rec[c]).empty()) {
        throw Error(ErrorKind::MissingValue, "missing value at row " + std::to_string(r + 1) +
                                                 ", column '" + header[c] + "'");
      }
    }
  }

  auto numeric_column = [&](std::size_t c, ErrorKind on_failure) {
    Vector values(static_cast<Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto v = parse_real(records[r + 1][c]);
      if (!v) {
        throw Error(on_failure, "column '" + header[c] + "' row " + std::to_string(r + 1) +
                                    ": '" + records[r + 1][c] + "' is not a finite number");
      }
      values[static_cast<Index>(r)] = *v;
    }
    return values;
  };

  Dataset ds;
  const Vector y = numeric_column(response_col, ErrorKind::NonNumericResponse);
  ds.responses = y;
  if (prediction_col) {
    const Vector pred = numeric_column(*prediction_col, ErrorKind::NonNumericResponse);
    for (Index i = 0; i < y.size(); ++i) {
      ds.responses[i] = options.response_mode.apply(y[i], pred[i]);
    }
  }

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == response_col || (prediction_col && c == *prediction_col)) continue;
    feature_cols.push_back(c);
  }
  if (feature_cols.empty()) throw Error(ErrorKind::EmptyDataset, "no feature columns");

  ds.features.resize(static_cast<Index>(rows), static_cast<Index>(feature_cols.size()));
  for (std::size_t k = 0; k < feature_cols.size(); ++k) {
    const std::size_t c = feature_cols[k];
    const auto col = static_cast<Index>(k);
    ds.column_names.push_back(header[c]);

    std::optional<ColumnType> type;
    if (auto it = options.schema_overrides.find(header[c]); it != options.schema_overrides.end()) {
      type = it->second;
    }
    if (!type) {
      bool all_numeric = true;
      for (std::size_t r = 0; r < rows && all_numeric; ++r) {
        all_numeric = parse_real(records[r + 1][c]).has_value();
      }
      type = all_numeric ? ColumnType::Numeric : ColumnType::Categorical;
    }
    ds.column_types.push_back(*type);

    if (*type == ColumnType::Numeric) {
      ds.features.col(col) = numeric_column(c, ErrorKind::MalformedCsv);
      ds.levels.emplace_back();
    } else {
      std::vector<std::string> levels;
      std::unordered_map<std::string, int> code_of;
      for (std::size_t r = 0; r < rows; ++r) {
        std::string value(trim(records[r + 1][c]));
        auto [it, inserted] = code_of.emplace(value, static_cast<int>(levels.size()));
        if (inserted) levels.push_back(std::move(value));
        ds.features(static_cast<Index>(r), col) = it->second;
      }
      ds.levels.push_back(std::move(levels));
    }
  }
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return parse_dataset(in, options);
}

void write_dataset_csv(std::ostream& out, const Dataset& ds, std::string_view response_name) {
  for (Index j = 0; j < ds.d(); ++j) {
    out << quote_if_needed(ds.column_names[static_cast<std::size_t>(j)]) << ',';
  }
  out << quote_if_needed(response_name) << '\n';
  for (Index i = 0; i < ds.n(); ++i) {
    for (Index j = 0; j < ds.d(); ++j) {
      const auto col = static_cast<std::size_t>(j);
      if (ds.column_types[col] == ColumnType::Numeric) {
        out << format_real(ds.features(i, j));
      } else {
        out << quote_if_needed(ds.levels[col][static_cast<std::size_t>(ds.features(i, j))]);
      }
      out << ',';
    }
    out << format_real(ds.responses[i]) << '\n';
  }
}

Vector feature_ranges(const Dataset& ds) {
  Vector r = Vector::Zero(ds.d());
  for (Index j = 0; j < ds.d(); ++j) {
    if (ds.column_types[static_cast<std::size_t>(j)] == ColumnType::Numeric) {
      r[j] = ds.features.col(j).maxCoeff() - ds.features.col(j).minCoeff();
    }
  }
  return r;
}

std::string summarize(const Dataset& ds) {
  std::ostringstream os;
  const Vector ranges = feature_ranges(ds);
  os << "n: " << ds.n() << '\n' << "d: " << ds.d() << '\n';
  os << "response_mean: " << format_real(ds.responses.mean()) << '\n';
  os << "columns:\n";
  for (Index j = 0; j < ds.d(); ++j) {
    const auto col = static_cast<std::size_t>(j);
    os << "  " << ds.column_names[col] << "  " << column_type_name(ds.column_types[col]);
    if (ds.column_types[col] == ColumnType::Numeric) {
      os << "  range=" << format_real(ranges[j]);
    } else {
      os << "  levels=" << ds.levels[col].size();
    }
    os << '\n';
  }
  return os.str();
}

SimilarityRule parse_similarity_rule(std::string_view text) {
  text = trim(text);
  if (text == "equality" || text == "equal") return Equality{};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::InvalidSimilarity, "cannot parse similarity rule '" +
                                                  std::string(text) + "'");
  }
  const auto kind = trim(text.substr(0, colon));
  const auto value = parse_real(text.substr(colon + 1));
  if (!value) {
    throw Error(ErrorKind::InvalidSimilarity,
                "similarity rule '" + std::string(text) + "' has no numeric parameter");
  }
  if (kind == "relative") return RelativeRange{*value};
  if (kind == "absolute") return AbsoluteRange{*value};
  throw Error(ErrorKind::InvalidSimilarity,
              "unknown similarity rule kind '" + std::string(kind) + "'");
}

std::string to_string(const SimilarityRule& rule) {
  struct Visitor {
    std::string operator()(const Equality&) const { return "equality"; }
    std::string operator()(const RelativeRange& r) const {
      return "relative:" + format_real(r.delta);
    }
    std::string operator()(const AbsoluteRange& r) const {
      return "absolute:" + format_real(r.width);
    }
  };
  return std::visit(Visitor{}, rule);
}

SimilaritySpec SimilaritySpec::with_default(const Dataset& ds, SimilarityRule numeric_default) {
  SimilaritySpec spec;
  spec.rules.reserve(static_cast<std::size_t>(ds.d()));
  for (auto type : ds.column_types) {
    spec.rules.push_back(type == ColumnType::Numeric ? numeric_default
                                                     : SimilarityRule{Equality{}});
  }
  return spec;
}

void SimilaritySpec::validate(const Dataset& ds) const {
  if (rules.size() != static_cast<std::size_t>(ds.d())) {
    throw Error(ErrorKind::InvalidSimilarity,
                "similarity spec has " + std::to_string(rules.size()) + " rules for " +
                    std::to_string(ds.d()) + " columns");
  }
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const auto& name = ds.column_names[j];
    if (const auto* rel = std::get_if<RelativeRange>(&rules[j])) {
      if (!(rel->delta > 0.0 && rel->delta <= 1.0)) {
        throw Error(ErrorKind::InvalidSimilarity,
                    "column '" + name + "': relative delta must lie in (0, 1]");
      }
    } else if (const auto* abs = std::get_if<AbsoluteRange>(&rules[j])) {
      if (!(abs->width >= 0.0) || !std::isfinite(abs->width)) {
        throw Error(ErrorKind::InvalidSimilarity,
                    "column '" + name + "': absolute width must be >= 0");
      }
    }
    if (ds.column_types[j] == ColumnType::Categorical &&
        !std::holds_alternative<Equality>(rules[j])) {
      throw Error(ErrorKind::InvalidSimilarity,
                  "column '" + name + "' is categorical and must use equality");
    }
  }
}

}  // namespace cohortig
