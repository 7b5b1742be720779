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

#ifndef COHORTIG_VALUE_FUNCTIONS_HPP_
#define COHORTIG_VALUE_FUNCTIONS_HPP_

#include <memory>
#include <mutex>
#include <unordered_map>

#include <Eigen/Cholesky>

#include "cohortig/dataset.hpp"
#include "cohortig/shapley.hpp"
#include "cohortig/similarity.hpp"

namespace cohortig {

/// Cohort mean: nu(u) = mean of the responses over C_u. Never divides by zero
/// since the target is always in its own cohort.
class CohortValue final : public ValueFunction {
 public:
  CohortValue(std::shared_ptr<const SimilarityProfile> profile, Vector responses);

  Index dimension() const override { return profile_->d(); }
  double operator()(const FeatureSet& u) const override;
  CostClass cost_class() const override { return CostClass::Cheap; }
  std::unique_ptr<SubsetWalker> subset_walker() const override;
  std::unique_ptr<PrefixWalker> prefix_walker() const override;

  const SimilarityProfile& profile() const { return *profile_; }
  const Vector& responses() const { return responses_; }

 private:
  std::shared_ptr<const SimilarityProfile> profile_;
  Vector responses_;
};

/// Uniqueness: nu(u) = -log2 |C_u|.
class UniquenessValue final : public ValueFunction {
 public:
  explicit UniquenessValue(std::shared_ptr<const SimilarityProfile> profile);

  Index dimension() const override { return profile_->d(); }
  double operator()(const FeatureSet& u) const override;
  CostClass cost_class() const override { return CostClass::Cheap; }
  std::unique_ptr<SubsetWalker> subset_walker() const override;
  std::unique_ptr<PrefixWalker> prefix_walker() const override;

 private:
  std::shared_ptr<const SimilarityProfile> profile_;
};

struct GkwOptions {
  double sigma = 0.1;
  /// Ridge lambda * trace(Sigma) / d * I is added before any factorization.
  double ridge = 1e-6;
  /// Upper bound on cached factorizations of Sigma_uu.
  std::size_t cache_capacity = std::size_t{1} << 16;
};

// Target-independent part of the empirical Gaussian kernel weight value
// function: standardized features, their regularized sample covariance and a
// shared cache of Cholesky factors of its principal submatrices. Safe to
// share across threads.
class GkwModel {
 public:
  GkwModel(const Dataset& ds, const GkwOptions& options = {});
  GkwModel(const Matrix& features, const GkwOptions& options = {});

  Index n() const { return standardized_.rows(); }
  Index d() const { return standardized_.cols(); }
  const GkwOptions& options() const { return options_; }
  const Matrix& standardized() const { return standardized_; }
  const Matrix& covariance() const { return covariance_; }

  /// Squared scaled Mahalanobis distances D_u^2(x_i, x_t) for every row i.
  Vector squared_distances(const FeatureSet& u, Index target) const;

 private:
  std::shared_ptr<const Eigen::LLT<Matrix>> factor(const FeatureSet& u) const;

  GkwOptions options_;
  Matrix standardized_;
  Matrix covariance_;  // includes the ridge
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<FeatureSet, std::shared_ptr<const Eigen::LLT<Matrix>>> cache_;
};

/// nu(u) = sum_i w_i f_i / sum_i w_i with w_i = exp(-D_u^2 / (2 sigma^2));
/// all weights are 1 for the empty set.
class GkwValue final : public ValueFunction {
 public:
  GkwValue(std::shared_ptr<const GkwModel> model, Index target, Vector responses);

  Index dimension() const override { return model_->d(); }
  double operator()(const FeatureSet& u) const override;

  /// The kernel weights behind nu(u).
  Vector weights(const FeatureSet& u) const;

 private:
  std::shared_ptr<const GkwModel> model_;
  Index target_;
  Vector responses_;
};

}  // namespace cohortig

#endif  // COHORTIG_VALUE_FUNCTIONS_HPP_
