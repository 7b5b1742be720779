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

#ifndef COHORTIG_ATTRIBUTION_IO_HPP_
#define COHORTIG_ATTRIBUTION_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohortig/shapley.hpp"

namespace cohortig {

// Attribution files are JSON Lines. The first line is a header
//
//   {"schema":"cohortig.attribution","version":1,"config":{...}}
//
// carrying the fully resolved run configuration; every further line is one
// record per target:
//
//   {"method":"igcs","target_index":0,"values":{"<column>":psi,...},
//    "nu_empty":..,"nu_full":..,"efficiency_gap":..,
//    ["standard_error":{"<column>":..}], ["steps":R], ["samples":m],
//    ["seed":s], ["seconds":t]}
//
// Values are keyed by column name in column order.
inline constexpr const char* kAttributionSchema = "cohortig.attribution";
inline constexpr int kAttributionVersion = 1;

using Json = nlohmann::ordered_json;

struct AttributionRecord {
  Attribution attribution;
  std::optional<double> seconds;
};

struct AttributionFile {
  Json config;
  std::vector<std::string> feature_names;
  std::vector<AttributionRecord> records;
};

void write_attribution_header(std::ostream& out, const Json& config);
void write_attribution_record(std::ostream& out, const Attribution& attr,
                              const std::vector<std::string>& feature_names,
                              std::optional<double> seconds = std::nullopt);

/// Parses a whole attribution file; throws MalformedCsv-class data errors on
/// schema violations and DimensionMismatch on inconsistent feature names.
AttributionFile read_attributions(std::istream& in);
AttributionFile read_attributions(const std::filesystem::path& path);

}  // namespace cohortig

#endif  // COHORTIG_ATTRIBUTION_IO_HPP_
