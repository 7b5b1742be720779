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

#ifndef COHORTIG_IGCS_HPP_
#define COHORTIG_IGCS_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "cohortig/shapley.hpp"
#include "cohortig/similarity.hpp"

namespace cohortig {

/// Midpoint rule on [0, 1]: nodes (2r - 1) / (2R) for r = 1..R, equal weights.
struct QuadratureSpec {
  int steps = 50;

  Vector nodes() const;
};

// Soft cohort mean on the unit cube,
//
//   nu(z) = sum_i f_i s_z(x_i) / sum_i s_z(x_i),  s_z(x_i) = prod_{j in J_i} (1 - z_j),
//
// which agrees with the cohort mean at every corner 1_u:0_{-u}. Rows are also
// grouped by |J_i| so that on the diagonal each distinct power (1 - a)^c is
// computed once per node.
class SoftValue {
 public:
  SoftValue(std::shared_ptr<const SimilarityProfile> profile, Vector responses);

  const SimilarityProfile& profile() const { return *profile_; }
  const Vector& responses() const { return responses_; }
  Index n() const { return profile_->n(); }
  Index d() const { return profile_->d(); }

  /// Distinct values of |J_i| in increasing order, with row counts and
  /// response sums per value.
  const Eigen::VectorXi& distinct_counts() const { return distinct_counts_; }
  const Vector& rows_per_count() const { return rows_per_count_; }
  const Vector& response_sum_per_count() const { return response_sum_per_count_; }

 private:
  std::shared_ptr<const SimilarityProfile> profile_;
  Vector responses_;
  Eigen::VectorXi distinct_counts_;
  Vector rows_per_count_;
  Vector response_sum_per_count_;
};

double soft_value(const SoftValue& sv, const Eigen::Ref<const Vector>& z);

/// Exact gradient of nu(z) by the quotient rule. O(sum_i |J_i|).
Vector soft_gradient(const SoftValue& sv, const Eigen::Ref<const Vector>& z);

/// Sums on the diagonal z = alpha * 1:
///   B = sum_i (1-a)^|J_i|,  C = sum_i f_i (1-a)^|J_i|,
///   D_k = -sum_{i: k in J_i} (1-a)^(|J_i|-1),  A_k = same weighted by f_i.
struct DiagonalSums {
  double denominator = 0.0;  // B
  double numerator = 0.0;    // C
  Vector d_sums;             // D
  Vector a_sums;             // A

  /// (A_k B - C D_k) / B^2.
  Vector gradient() const;
  double value() const { return numerator / denominator; }
};

DiagonalSums diagonal_fast_path(const SoftValue& sv, double alpha);

/// Integrated gradients of the soft cohort mean along the main diagonal,
/// averaged over the midpoint nodes.
Attribution igcs_attribution(const SoftValue& sv, const QuadratureSpec& quad = {});

// A function on [0, 1]^d for generic path integration. Without a gradient the
// finite-difference path estimator is used instead.
struct PathFunction {
  Index dimension = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

/// Diagonal-path integrated gradients of `g`. With a gradient: midpoint-rule
/// average of grad g(alpha 1). Without: sum_{r<R} g(r/R 1 + e_j/R) - g(r/R 1).
Vector ig_of_function(const PathFunction& g, const QuadratureSpec& quad = {});

}  // namespace cohortig

#endif  // COHORTIG_IGCS_HPP_
