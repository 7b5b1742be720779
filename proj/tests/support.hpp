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

#ifndef COHORTIG_TESTS_SUPPORT_HPP_
#define COHORTIG_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "cohortig/core.hpp"
#include "cohortig/dataset.hpp"
#include "cohortig/similarity.hpp"

namespace cohortig::testing {

// Three rows, two binary features, responses 1, 2, 3.
inline Dataset d3() {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 0, 0, 0, 1, 1, 1;
  ds.responses = Vector{{1.0, 2.0, 3.0}};
  ds.column_names = {"x1", "x2"};
  ds.column_types = {ColumnType::Numeric, ColumnType::Numeric};
  ds.levels = {{}, {}};
  return ds;
}

inline std::shared_ptr<const SimilarityProfile> d3_profile() {
  const Dataset ds = d3();
  return std::make_shared<const SimilarityProfile>(
      SimilarityProfile::build(ds, SimilaritySpec::with_default(ds, Equality{}), 0));
}

// Small integer-valued features so that equality similarity produces ties.
inline Dataset random_dataset(std::mt19937_64& gen, Index n, Index d, int levels = 3) {
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset ds;
  ds.features.resize(n, d);
  ds.responses.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) ds.features(i, j) = level(gen);
    ds.responses(i) = noise(gen);
  }
  for (Index j = 0; j < d; ++j) {
    ds.column_names.push_back("x" + std::to_string(j + 1));
    ds.column_types.push_back(ColumnType::Numeric);
    ds.levels.emplace_back();
  }
  return ds;
}

inline std::vector<FeatureSet> random_sets(std::mt19937_64& gen, Index n, Index d, Index target,
                                           double density) {
  std::bernoulli_distribution bit(density);
  std::vector<FeatureSet> sets(static_cast<std::size_t>(n), FeatureSet(static_cast<std::size_t>(d)));
  for (Index i = 0; i < n; ++i) {
    if (i == target) continue;
    for (Index j = 0; j < d; ++j) {
      if (bit(gen)) sets[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
    }
  }
  return sets;
}

// Mean response over rows equal to the target on every feature in `u`,
// computed straight from the raw features.
inline double direct_cohort_mean(const Dataset& ds, Index target, const FeatureSet& u) {
  double sum = 0.0;
  double count = 0.0;
  for (Index i = 0; i < ds.n(); ++i) {
    bool keep = true;
    for (Index j = 0; j < ds.d(); ++j) {
      if (u.test(static_cast<std::size_t>(j)) && ds.features(i, j) != ds.features(target, j)) {
        keep = false;
      }
    }
    if (keep) {
      sum += ds.responses(i);
      count += 1.0;
    }
  }
  return sum / count;
}

// Average of incremental values over all d! orderings.
inline Vector permutation_shapley(Index d, const std::function<double(const FeatureSet&)>& nu) {
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  Vector phi = Vector::Zero(d);
  double count = 0.0;
  do {
    FeatureSet u(static_cast<std::size_t>(d));
    double previous = nu(u);
    for (const Index j : order) {
      u.set(static_cast<std::size_t>(j));
      const double current = nu(u);
      phi(j) += current - previous;
      previous = current;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  return phi / count;
}

inline FeatureSet subset_from_mask(Index d, std::uint64_t mask) {
  FeatureSet u(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    if ((mask >> j) & 1U) u.set(static_cast<std::size_t>(j));
  }
  return u;
}

inline std::uint64_t mask_from_subset(const FeatureSet& u) {
  std::uint64_t mask = 0;
  for_each_member(u, [&](Index j) { mask |= std::uint64_t{1} << j; });
  return mask;
}

}  // namespace cohortig::testing

#endif  // COHORTIG_TESTS_SUPPORT_HPP_
