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

#ifndef COHORTIG_CONFIG_HPP_
#define COHORTIG_CONFIG_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "cohortig/dataset.hpp"

namespace cohortig {

// Key-value configuration files.
//
//   file    := { line }
//   line    := blank | comment | entry
//   comment := ('#' | ';') any-text
//   entry   := key '=' value
//   key     := [A-Za-z0-9_.-]+
//   value   := any-text, surrounding whitespace trimmed; an optional pair of
//              enclosing double quotes is stripped
//
// Repeating a key is an error. Per-column similarity rules use keys of the
// form `similarity.<column name>`.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::filesystem::path& path);

/// Builds the per-column rules: `default_rule` (or relative:0.1) for numeric
/// columns, equality for categorical columns, then applies `per_column`
/// overrides keyed by column name.
SimilaritySpec resolve_similarity(const Dataset& ds,
                                  const std::optional<std::string>& default_rule,
                                  const std::map<std::string, std::string>& per_column);

}  // namespace cohortig

#endif  // COHORTIG_CONFIG_HPP_
