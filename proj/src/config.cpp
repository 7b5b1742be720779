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

#include "cohortig/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

namespace cohortig {
namespace {

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trimmed(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(number) + ": expected key = value");
    }
    // Keys may contain column names, which are free-form after "similarity.".
    std::string key = trimmed(text.substr(0, eq));
    std::string value = trimmed(text.substr(eq + 1));
    const bool column_key = key.rfind("similarity.", 0) == 0 && key.size() > 11;
    if (!column_key && !valid_key(key)) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(number) + ": bad key '" + key + "'");
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!out.emplace(key, value).second) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

SimilaritySpec resolve_similarity(const Dataset& ds,
                                  const std::optional<std::string>& default_rule,
                                  const std::map<std::string, std::string>& per_column) {
  const SimilarityRule numeric_default =
      default_rule ? parse_similarity_rule(*default_rule) : SimilarityRule{RelativeRange{0.1}};
  SimilaritySpec spec = SimilaritySpec::with_default(ds, numeric_default);
  for (const auto& [column, rule] : per_column) {
    const auto it = std::find(ds.column_names.begin(), ds.column_names.end(), column);
    if (it == ds.column_names.end()) {
      throw Error(ErrorKind::Config, "similarity rule names unknown feature column '" + column + "'");
    }
    spec.rules[static_cast<std::size_t>(it - ds.column_names.begin())] = parse_similarity_rule(rule);
  }
  spec.validate(ds);
  return spec;
}

}  // namespace cohortig
