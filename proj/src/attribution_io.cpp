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

#include "cohortig/attribution_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace cohortig {
namespace {

Json keyed(const Vector& values, const std::vector<std::string>& names) {
  Json obj = Json::object();
  for (Index j = 0; j < values.size(); ++j) obj[names[static_cast<std::size_t>(j)]] = values[j];
  return obj;
}

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::MalformedCsv, "attribution file: " + what);
}

}  // namespace

void write_attribution_header(std::ostream& out, const Json& config) {
  Json header = Json::object();
  header["schema"] = kAttributionSchema;
  header["version"] = kAttributionVersion;
  header["config"] = config;
  out << header.dump() << '\n';
}

void write_attribution_record(std::ostream& out, const Attribution& attr,
                              const std::vector<std::string>& feature_names,
                              std::optional<double> seconds) {
  if (static_cast<Index>(feature_names.size()) != attr.d()) {
    throw Error(ErrorKind::DimensionMismatch, "feature names and attribution differ in length");
  }
  Json rec = Json::object();
  rec["method"] = attr.method;
  rec["target_index"] = attr.target_index;
  rec["values"] = keyed(attr.values, feature_names);
  rec["nu_empty"] = attr.nu_empty;
  rec["nu_full"] = attr.nu_full;
  rec["efficiency_gap"] = attr.efficiency_gap;
  if (attr.standard_error) rec["standard_error"] = keyed(*attr.standard_error, feature_names);
  if (attr.meta.steps) rec["steps"] = *attr.meta.steps;
  if (attr.meta.samples) rec["samples"] = *attr.meta.samples;
  if (attr.meta.seed) rec["seed"] = *attr.meta.seed;
  if (seconds) rec["seconds"] = *seconds;
  out << rec.dump() << '\n';
}

AttributionFile read_attributions(std::istream& in) {
  AttributionFile file;
  std::string line;
  bool have_header = false;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json doc;
    try {
      doc = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      bad("line " + std::to_string(number) + " is not JSON: " + e.what());
    }
    try {
      if (!have_header) {
        if (doc.value("schema", "") != kAttributionSchema) bad("missing schema header");
        if (doc.value("version", 0) != kAttributionVersion) bad("unsupported schema version");
        file.config = doc.value("config", Json::object());
        have_header = true;
        continue;
      }
      AttributionRecord record;
      Attribution& a = record.attribution;
      a.method = doc.at("method").get<std::string>();
      a.target_index = doc.at("target_index").get<Index>();
      const Json& values = doc.at("values");
      std::vector<std::string> names;
      a.values.resize(static_cast<Index>(values.size()));
      Index j = 0;
      for (auto it = values.begin(); it != values.end(); ++it, ++j) {
        names.push_back(it.key());
        a.values[j] = it.value().get<double>();
      }
      if (file.feature_names.empty()) {
        file.feature_names = names;
      } else if (names != file.feature_names) {
        throw Error(ErrorKind::DimensionMismatch,
                    "attribution file line " + std::to_string(number) +
                        " has different feature names from earlier records");
      }
      a.nu_empty = doc.at("nu_empty").get<double>();
      a.nu_full = doc.at("nu_full").get<double>();
      a.efficiency_gap = doc.at("efficiency_gap").get<double>();
      if (doc.contains("standard_error")) {
        Vector se(a.values.size());
        Index k = 0;
        for (const auto& v : doc["standard_error"]) se[k++] = v.get<double>();
        a.standard_error = se;
      }
      if (doc.contains("steps")) a.meta.steps = doc["steps"].get<int>();
      if (doc.contains("samples")) a.meta.samples = doc["samples"].get<std::int64_t>();
      if (doc.contains("seed")) a.meta.seed = doc["seed"].get<std::uint64_t>();
      if (doc.contains("seconds")) record.seconds = doc["seconds"].get<double>();
      file.records.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      bad("line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (!have_header) bad("empty file");
  return file;
}

AttributionFile read_attributions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return read_attributions(in);
}

}  // namespace cohortig
