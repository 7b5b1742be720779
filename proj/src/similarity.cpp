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

#include "cohortig/similarity.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace cohortig {

SimilarityProfile::SimilarityProfile(Index target, Index d, std::vector<FeatureSet> sets)
    : target_(target), d_(d), dissim_(std::move(sets)) {
  const Index n = static_cast<Index>(dissim_.size());
  counts_.resize(n);
  std::vector<Eigen::Triplet<double, int>> entries;
  for (Index i = 0; i < n; ++i) {
    const auto& set = dissim_[static_cast<std::size_t>(i)];
    counts_[i] = static_cast<int>(set.count());
    for_each_member(set, [&](Index j) {
      entries.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
    });
  }
  incidence_.resize(n, d);
  incidence_.setFromTriplets(entries.begin(), entries.end());
  incidence_.makeCompressed();
}

SimilarityProfile SimilarityProfile::build(const Dataset& ds, const SimilaritySpec& spec,
                                           Index target) {
  if (target < 0 || target >= ds.n()) {
    throw Error(ErrorKind::TargetOutOfRange, "target " + std::to_string(target) +
                                                 " outside [0, " + std::to_string(ds.n()) + ")");
  }
  spec.validate(ds);
  const Vector ranges = feature_ranges(ds);
  std::vector<FeatureSet> sets(static_cast<std::size_t>(ds.n()),
                               FeatureSet(static_cast<std::size_t>(ds.d())));
  for (Index j = 0; j < ds.d(); ++j) {
    const auto& rule = spec.rules[static_cast<std::size_t>(j)];
    const double xt = ds.features(target, j);
    // Equality compares parsed values bit-for-bit.
    double threshold = 0.0;
    if (const auto* rel = std::get_if<RelativeRange>(&rule)) {
      threshold = rel->delta * ranges[j];
    } else if (const auto* abs = std::get_if<AbsoluteRange>(&rule)) {
      threshold = abs->width;
    }
    const bool equality = std::holds_alternative<Equality>(rule);
    for (Index i = 0; i < ds.n(); ++i) {
      const double xi = ds.features(i, j);
      const bool similar = equality ? xi == xt : std::abs(xi - xt) <= threshold;
      if (!similar) sets[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
    }
  }
  return SimilarityProfile(target, ds.d(), std::move(sets));
}

SimilarityProfile SimilarityProfile::from_dissimilarity_sets(Index target, Index d,
                                                             std::vector<FeatureSet> sets) {
  const Index n = static_cast<Index>(sets.size());
  if (target < 0 || target >= n) {
    throw Error(ErrorKind::TargetOutOfRange, "target " + std::to_string(target) +
                                                 " outside [0, " + std::to_string(n) + ")");
  }
  for (const auto& set : sets) {
    if (static_cast<Index>(set.size()) != d) {
      throw Error(ErrorKind::DimensionMismatch, "dissimilarity set width differs from d");
    }
  }
  if (sets[static_cast<std::size_t>(target)].any()) {
    throw Error(ErrorKind::InvalidArgument, "the target must be similar to itself");
  }
  return SimilarityProfile(target, d, std::move(sets));
}

IndicatorMatrix SimilarityProfile::indicators() const {
  IndicatorMatrix s = IndicatorMatrix::Ones(n(), d_);
  for (Index i = 0; i < n(); ++i) {
    for_each_member(dissimilarity_set(i), [&](Index j) { s(i, j) = 0; });
  }
  return s;
}

std::vector<Index> cohort(const SimilarityProfile& profile, const FeatureSet& u) {
  if (static_cast<Index>(u.size()) != profile.d()) {
    throw Error(ErrorKind::DimensionMismatch, "feature subset width differs from d");
  }
  std::vector<Index> members;
  for (Index i = 0; i < profile.n(); ++i) {
    if (!profile.dissimilarity_set(i).intersects(u)) members.push_back(i);
  }
  return members;
}

void check_unit_cube(const Eigen::Ref<const Vector>& z, Index d) {
  if (z.size() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "z has " + std::to_string(z.size()) + " entries, expected " + std::to_string(d));
  }
  for (Index j = 0; j < d; ++j) {
    if (!(z[j] >= 0.0 && z[j] <= 1.0)) {
      throw Error(ErrorKind::ZOutOfRange, "z[" + std::to_string(j) + "] = " +
                                              std::to_string(z[j]) + " is outside [0, 1]");
    }
  }
}

Vector soft_similarity(const SimilarityProfile& profile, const Eigen::Ref<const Vector>& z) {
  check_unit_cube(z, profile.d());
  Vector s(profile.n());
  for (Index i = 0; i < profile.n(); ++i) {
    double prod = 1.0;
    for_each_member(profile.dissimilarity_set(i), [&](Index j) { prod *= 1.0 - z[j]; });
    s[i] = prod;
  }
  return s;
}

}  // namespace cohortig
