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

#ifndef COHORTIG_EVALUATION_HPP_
#define COHORTIG_EVALUATION_HPP_

#include <cstdint>
#include <vector>

#include "cohortig/shapley.hpp"

namespace cohortig {

using Ordering = std::vector<Index>;

/// Features by decreasing attribution; ties go to the lower feature index.
Ordering variable_ordering(const Eigen::Ref<const Vector>& values);
inline Ordering variable_ordering(const Attribution& attr) {
  return variable_ordering(attr.values);
}

struct Curves {
  Vector insertion;  // insertion[k] = nu(first k of the ordering)
  Vector deletion;   // deletion[k] = nu(last d - k of the ordering)
};

/// Conditional insertion and deletion curves, d + 1 points each, computed by
/// refining the cohort one feature at a time.
Curves conditional_curves(const ValueFunction& nu, const Ordering& ordering);

/// Trapezoid area with unit spacing over [0, d].
template <typename Derived>
double trapezoid_area(const Eigen::MatrixBase<Derived>& curve) {
  const Index points = curve.size();
  if (points < 2) return 0.0;
  return curve.sum() - 0.5 * (curve(0) + curve(points - 1));
}

/// Area under the straight line from (0, y_0) to (d, y_d).
template <typename Derived>
double chord_area(const Eigen::MatrixBase<Derived>& curve) {
  const Index points = curve.size();
  if (points < 2) return 0.0;
  return 0.5 * static_cast<double>(points - 1) * (curve(0) + curve(points - 1));
}

struct AbcScores {
  double insertion = 0.0;  // AUC(insertion) - AUC(chord)
  double deletion = 0.0;   // AUC(chord) - AUC(deletion)

  double sum() const { return insertion + deletion; }
};

AbcScores abc_scores(const Eigen::Ref<const Vector>& insertion,
                     const Eigen::Ref<const Vector>& deletion);

struct AbcReport {
  Index target_index = -1;
  Ordering ordering;
  Vector insertion_curve;
  Vector deletion_curve;
  double abc_insertion = 0.0;
  double abc_deletion = 0.0;
};

AbcReport evaluate_ordering(const ValueFunction& nu, const Ordering& ordering,
                            Index target_index = -1);

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean and standard error of the mean (0 for fewer than two values).
MeanAndError mean_and_error(const std::vector<double>& values);

struct RandomBaseline {
  MeanAndError insertion;
  MeanAndError deletion;
  MeanAndError sum;
  std::int64_t trials = 0;
};

/// ABC scores of `trials` uniformly random orderings.
RandomBaseline random_ordering_baseline(const ValueFunction& nu, std::int64_t trials,
                                        std::uint64_t seed);

/// A uniformly random ordering of d features.
Ordering random_ordering(Index d, std::uint64_t seed);

}  // namespace cohortig

#endif  // COHORTIG_EVALUATION_HPP_
