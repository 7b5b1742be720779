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

#ifndef COHORTIG_SHAPLEY_HPP_
#define COHORTIG_SHAPLEY_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "cohortig/core.hpp"

namespace cohortig {

enum class CostClass { Cheap, Expensive };

// Walks subsets by toggling one feature at a time, starting from the empty set.
class SubsetWalker {
 public:
  virtual ~SubsetWalker() = default;
  virtual void reset() = 0;
  virtual void toggle(Index j) = 0;
  virtual double value() const = 0;
};

// Grows a subset one feature at a time, starting from the empty set.
class PrefixWalker {
 public:
  virtual ~PrefixWalker() = default;
  virtual void reset() = 0;
  virtual void refine(Index j) = 0;
  virtual double value() const = 0;
};

// A set function nu: 2^[d] -> R. Implementations are immutable and may be
// evaluated concurrently. The walkers default to plain re-evaluation; value
// functions with cheap incremental updates override them.
class ValueFunction {
 public:
  virtual ~ValueFunction() = default;

  virtual Index dimension() const = 0;
  virtual double operator()(const FeatureSet& u) const = 0;
  virtual CostClass cost_class() const { return CostClass::Expensive; }

  virtual std::unique_ptr<SubsetWalker> subset_walker() const;
  virtual std::unique_ptr<PrefixWalker> prefix_walker() const;

  double empty_value() const;
  double full_value() const;
};

// Adapts any callable on feature subsets.
class FunctionValue final : public ValueFunction {
 public:
  using Fn = std::function<double(const FeatureSet&)>;

  FunctionValue(Index d, Fn fn, CostClass cost = CostClass::Cheap)
      : d_(d), fn_(std::move(fn)), cost_(cost) {}

  Index dimension() const override { return d_; }
  double operator()(const FeatureSet& u) const override { return fn_(u); }
  CostClass cost_class() const override { return cost_; }

 private:
  Index d_;
  Fn fn_;
  CostClass cost_;
};

struct AttributionMeta {
  std::optional<int> steps;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
};

struct Attribution {
  std::string method;
  Index target_index = -1;
  Vector values;  // phi (Shapley) or psi (integrated gradients)
  double nu_empty = 0.0;
  double nu_full = 0.0;
  double efficiency_gap = 0.0;  // (nu_full - nu_empty) - sum(values)
  std::optional<Vector> standard_error;
  AttributionMeta meta;

  Index d() const { return values.size(); }
  void finalize_gap() { efficiency_gap = (nu_full - nu_empty) - values.sum(); }
};

struct ExactOptions {
  /// Largest d accepted; cost grows as d * 2^(d-1).
  Index max_dimension = 25;
};

/// Exact Shapley values by enumerating all 2^d subsets in Gray-code order.
/// Throws DimensionTooLarge when d exceeds the cap.
Attribution exact_shapley(const ValueFunction& nu, const ExactOptions& options = {});

struct MonteCarloOptions {
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  /// When d <= this and samples >= d!, every permutation is enumerated once
  /// instead of sampling.
  Index exhaustive_max_dimension = 6;
};

/// Permutation-sampling estimate: the mean over sampled orderings of each
/// feature's increment when it joins the preceding features.
Attribution mc_shapley(const ValueFunction& nu, const MonteCarloOptions& options);

/// Shapley weight of an increment nu(u + j) - nu(u) with |u| = s among d
/// players: s! (d - s - 1)! / d!.
double shapley_weight(Index d, Index s);

}  // namespace cohortig

#endif  // COHORTIG_SHAPLEY_HPP_
