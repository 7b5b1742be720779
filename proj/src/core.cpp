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

#include "cohortig/core.hpp"

namespace cohortig {

FeatureSet make_feature_set(Index d, std::initializer_list<Index> members) {
  FeatureSet set(static_cast<std::size_t>(d));
  for (Index j : members) {
    if (j < 0 || j >= d) {
      throw Error(ErrorKind::InvalidArgument,
                  "feature index " + std::to_string(j) + " outside [0, " +
                      std::to_string(d) + ")");
    }
    set.set(static_cast<std::size_t>(j));
  }
  return set;
}

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonNumericResponse: return "NonNumericResponse";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::InvalidSimilarity: return "InvalidSimilarity";
    case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::ZOutOfRange: return "ZOutOfRange";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::CategoricalFeatureUnsupported: return "CategoricalFeatureUnsupported";
    case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorKind::EmptyDissimSet: return "EmptyDissimSet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSimilarity:
    case ErrorKind::TargetOutOfRange:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
      return ErrorCategory::Config;
    case ErrorKind::Io:
    case ErrorKind::MalformedCsv:
    case ErrorKind::MissingColumn:
    case ErrorKind::NonNumericResponse:
    case ErrorKind::MissingValue:
    case ErrorKind::EmptyDataset:
    case ErrorKind::CategoricalFeatureUnsupported:
    case ErrorKind::DimensionMismatch:
      return ErrorCategory::Data;
    case ErrorKind::ZOutOfRange:
    case ErrorKind::DimensionTooLarge:
    case ErrorKind::SingularCovariance:
    case ErrorKind::EpsOutOfRange:
    case ErrorKind::EmptyDissimSet:
      return ErrorCategory::Computation;
  }
  return ErrorCategory::Computation;
}

}  // namespace cohortig
