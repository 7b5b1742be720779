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

#ifndef COHORTIG_SIMILARITY_HPP_
#define COHORTIG_SIMILARITY_HPP_

#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "cohortig/dataset.hpp"

namespace cohortig {

using IndicatorMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
/// n x d with a 1 wherever observation i is dissimilar to the target on j.
using Incidence = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Binary similarity of every observation to one target, stored as the
// dissimilarity sets J_i = { j : S_j(x_i) = 0 }. J_target is always empty.
class SimilarityProfile {
 public:
  static SimilarityProfile build(const Dataset& ds, const SimilaritySpec& spec, Index target);

  /// Profile from explicit dissimilarity sets, for synthetic studies.
  /// `sets[target]` must be empty and every set must be `d` bits wide.
  static SimilarityProfile from_dissimilarity_sets(Index target, Index d,
                                                   std::vector<FeatureSet> sets);

  Index target() const { return target_; }
  Index n() const { return static_cast<Index>(dissim_.size()); }
  Index d() const { return d_; }

  const std::vector<FeatureSet>& dissimilarity_sets() const { return dissim_; }
  const FeatureSet& dissimilarity_set(Index i) const { return dissim_[static_cast<std::size_t>(i)]; }
  const Eigen::VectorXi& dissimilarity_counts() const { return counts_; }

  bool similar(Index i, Index j) const {
    return !dissim_[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(j));
  }

  /// S[i][j] as a dense 0/1 matrix.
  IndicatorMatrix indicators() const;

  /// Column j lists the rows dissimilar on feature j.
  const Incidence& incidence() const { return incidence_; }

 private:
  SimilarityProfile(Index target, Index d, std::vector<FeatureSet> sets);

  Index target_ = 0;
  Index d_ = 0;
  std::vector<FeatureSet> dissim_;
  Eigen::VectorXi counts_;
  Incidence incidence_;
};

/// C_u = { i : J_i and u are disjoint }, in increasing row order.
std::vector<Index> cohort(const SimilarityProfile& profile, const FeatureSet& u);

/// s_z(x_i) = prod_{j in J_i} (1 - z_j). Throws ZOutOfRange unless z lies in
/// the unit cube.
Vector soft_similarity(const SimilarityProfile& profile, const Eigen::Ref<const Vector>& z);

/// Throws ZOutOfRange unless `z` has `d` entries, each in [0, 1].
void check_unit_cube(const Eigen::Ref<const Vector>& z, Index d);

}  // namespace cohortig

#endif  // COHORTIG_SIMILARITY_HPP_
