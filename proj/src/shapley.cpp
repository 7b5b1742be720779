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

#include "cohortig/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "cohortig/rng.hpp"

namespace cohortig {
namespace {

// Largest d for which all 2^d values are tabulated; beyond it the exact
// engine aggregates by subset size instead.
constexpr Index kMaxTabulatedDimension = 22;

class GenericSubsetWalker final : public SubsetWalker {
 public:
  explicit GenericSubsetWalker(const ValueFunction& nu)
      : nu_(nu), u_(static_cast<std::size_t>(nu.dimension())) {
    reset();
  }
  void reset() override {
    u_.reset();
    value_ = nu_(u_);
  }
  void toggle(Index j) override {
    u_.flip(static_cast<std::size_t>(j));
    value_ = nu_(u_);
  }
  double value() const override { return value_; }

 private:
  const ValueFunction& nu_;
  FeatureSet u_;
  double value_ = 0.0;
};

class GenericPrefixWalker final : public PrefixWalker {
 public:
  explicit GenericPrefixWalker(const ValueFunction& nu)
      : nu_(nu), u_(static_cast<std::size_t>(nu.dimension())) {
    reset();
  }
  void reset() override {
    u_.reset();
    value_ = nu_(u_);
  }
  void refine(Index j) override {
    u_.set(static_cast<std::size_t>(j));
    value_ = nu_(u_);
  }
  double value() const override { return value_; }

 private:
  const ValueFunction& nu_;
  FeatureSet u_;
  double value_ = 0.0;
};

double binomial(Index n, Index k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

std::int64_t factorial_capped(Index d) {
  std::int64_t f = 1;
  for (Index i = 2; i <= d; ++i) {
    if (f > (std::int64_t{1} << 40)) return f;
    f *= i;
  }
  return f;
}

}  // namespace

std::unique_ptr<SubsetWalker> ValueFunction::subset_walker() const {
  return std::make_unique<GenericSubsetWalker>(*this);
}

std::unique_ptr<PrefixWalker> ValueFunction::prefix_walker() const {
  return std::make_unique<GenericPrefixWalker>(*this);
}

double ValueFunction::empty_value() const {
  return (*this)(FeatureSet(static_cast<std::size_t>(dimension())));
}

double ValueFunction::full_value() const {
  FeatureSet all(static_cast<std::size_t>(dimension()));
  all.set();
  return (*this)(all);
}

double shapley_weight(Index d, Index s) {
  return 1.0 / (static_cast<double>(d) * binomial(d - 1, s));
}

Attribution exact_shapley(const ValueFunction& nu, const ExactOptions& options) {
  const Index d = nu.dimension();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "value function has no features");
  if (d > options.max_dimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "exact Shapley needs d <= " + std::to_string(options.max_dimension) +
                    ", got d = " + std::to_string(d));
  }
  const std::uint64_t subsets = std::uint64_t{1} << d;
  const auto walker = nu.subset_walker();
  walker->reset();

  Attribution out;
  out.method = "shapley-exact";
  out.values = Vector::Zero(d);
  // Per-feature, per-size accumulators; the weight is applied once per size.
  Matrix by_size = Matrix::Zero(d, d + 1);

  if (d <= kMaxTabulatedDimension) {
    std::vector<double> table(subsets);
    std::uint64_t mask = 0;
    table[0] = walker->value();
    for (std::uint64_t i = 1; i < subsets; ++i) {
      const int bit = std::countr_zero(i);
      mask ^= std::uint64_t{1} << bit;
      walker->toggle(bit);
      table[mask] = walker->value();
    }
    // by_size(j, s) = sum over |u| = s, j not in u, of nu(u + j) - nu(u).
    for (std::uint64_t u = 0; u < subsets; ++u) {
      const int s = std::popcount(u);
      const double base = table[u];
      for (Index j = 0; j < d; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        if (u & bit) continue;
        by_size(j, s) += table[u | bit] - base;
      }
    }
    for (Index j = 0; j < d; ++j) {
      for (Index s = 0; s < d; ++s) out.values[j] += shapley_weight(d, s) * by_size(j, s);
    }
    out.nu_empty = table.front();
    out.nu_full = table.back();
  } else {
    // phi_j = sum_s w(s-1) In(j, s) - w(s) (Total(s) - In(j, s)), where In sums
    // nu over subsets of size s containing j.
    Vector total = Vector::Zero(d + 1);
    std::uint64_t mask = 0;
    auto accumulate = [&](double v) {
      const int s = std::popcount(mask);
      total[s] += v;
      for (std::uint64_t m = mask; m != 0; m &= m - 1) by_size(std::countr_zero(m), s) += v;
    };
    out.nu_empty = walker->value();
    accumulate(out.nu_empty);
    for (std::uint64_t i = 1; i < subsets; ++i) {
      const int bit = std::countr_zero(i);
      mask ^= std::uint64_t{1} << bit;
      walker->toggle(bit);
      accumulate(walker->value());
    }
    out.nu_full = total[d];
    for (Index j = 0; j < d; ++j) {
      double phi = 0.0;
      for (Index s = 1; s <= d; ++s) phi += shapley_weight(d, s - 1) * by_size(j, s);
      for (Index s = 0; s < d; ++s) phi -= shapley_weight(d, s) * (total[s] - by_size(j, s));
      out.values[j] = phi;
    }
  }
  out.finalize_gap();
  return out;
}

Attribution mc_shapley(const ValueFunction& nu, const MonteCarloOptions& options) {
  const Index d = nu.dimension();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "value function has no features");
  if (options.samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");

  const bool exhaustive = d <= options.exhaustive_max_dimension &&
                          options.samples >= factorial_capped(d);
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});

  Rng rng(options.seed);
  const auto walker = nu.prefix_walker();
  Vector mean = Vector::Zero(d);
  Vector m2 = Vector::Zero(d);
  std::int64_t count = 0;
  double nu_empty = 0.0;
  double nu_full = 0.0;

  auto run_permutation = [&] {
    walker->reset();
    double prev = walker->value();
    if (count == 0) nu_empty = prev;
    ++count;
    const double k = static_cast<double>(count);
    for (Index j : order) {
      walker->refine(j);
      const double v = walker->value();
      const double inc = v - prev;
      prev = v;
      const double delta = inc - mean[j];
      mean[j] += delta / k;
      m2[j] += delta * (inc - mean[j]);
    }
    if (count == 1) nu_full = prev;
  };

  if (exhaustive) {
    do {
      run_permutation();
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    for (std::int64_t m = 0; m < options.samples; ++m) {
      rng.shuffle(std::span<Index>(order));
      run_permutation();
    }
  }

  Attribution out;
  out.method = "shapley-mc";
  out.values = mean;
  out.nu_empty = nu_empty;
  out.nu_full = nu_full;
  if (count > 1) {
    out.standard_error = (m2.array() / static_cast<double>(count - 1)).sqrt() /
                         std::sqrt(static_cast<double>(count));
  } else {
    out.standard_error = Vector::Zero(d);
  }
  out.meta.samples = count;
  out.meta.seed = options.seed;
  out.finalize_gap();
  return out;
}

}  // namespace cohortig
