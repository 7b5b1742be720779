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

#ifndef COHORTIG_CORE_HPP_
#define COHORTIG_CORE_HPP_

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/dynamic_bitset.hpp>

namespace cohortig {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A subset of the d features, one bit per feature. Feature j is bit j
/// (zero-based); widths of several thousand bits are routine.
using FeatureSet = boost::dynamic_bitset<std::uint64_t>;

FeatureSet make_feature_set(Index d, std::initializer_list<Index> members);

/// Calls `fn(j)` for every member of `set` in increasing order.
template <typename Fn>
void for_each_member(const FeatureSet& set, Fn&& fn) {
  for (auto j = set.find_first(); j != FeatureSet::npos; j = set.find_next(j)) {
    fn(static_cast<Index>(j));
  }
}

/// Sum of the columns of `m` by pairwise (tree) reduction over the column
/// index. The association order depends only on the column count.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> pairwise_column_sum(
    const Eigen::MatrixBase<Derived>& m, Index begin, Index end) {
  using Column = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  if (end - begin <= 0) return Column::Zero(m.rows());
  if (end - begin == 1) return m.col(begin);
  const Index mid = begin + (end - begin) / 2;
  return pairwise_column_sum(m, begin, mid) + pairwise_column_sum(m, mid, end);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> pairwise_column_sum(
    const Eigen::MatrixBase<Derived>& m) {
  return pairwise_column_sum(m, 0, m.cols());
}

enum class ErrorKind {
  Io,
  MalformedCsv,
  MissingColumn,
  NonNumericResponse,
  MissingValue,
  EmptyDataset,
  InvalidSimilarity,
  TargetOutOfRange,
  ZOutOfRange,
  DimensionTooLarge,
  SingularCovariance,
  CategoricalFeatureUnsupported,
  EpsOutOfRange,
  EmptyDissimSet,
  DimensionMismatch,
  InvalidArgument,
  Config,
};

/// Coarse grouping used for process exit codes.
enum class ErrorCategory { Config, Data, Computation };

std::string_view error_kind_name(ErrorKind kind);
ErrorCategory error_category(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return error_category(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace cohortig

#endif  // COHORTIG_CORE_HPP_
