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

#include "cohortig/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "cohortig/rng.hpp"

namespace cohortig {
namespace {

void check_permutation(const Ordering& ordering, Index d) {
  if (static_cast<Index>(ordering.size()) != d) {
    throw Error(ErrorKind::DimensionMismatch, "ordering has " + std::to_string(ordering.size()) +
                                                  " entries, expected " + std::to_string(d));
  }
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (Index j : ordering) {
    if (j < 0 || j >= d || seen[static_cast<std::size_t>(j)]) {
      throw Error(ErrorKind::InvalidArgument, "ordering is not a permutation of the features");
    }
    seen[static_cast<std::size_t>(j)] = true;
  }
}

Vector walk(PrefixWalker& walker, auto first, auto last, Index d) {
  Vector curve(d + 1);
  walker.reset();
  curve[0] = walker.value();
  Index k = 1;
  for (auto it = first; it != last; ++it, ++k) {
    walker.refine(*it);
    curve[k] = walker.value();
  }
  return curve;
}

}  // namespace

Ordering variable_ordering(const Eigen::Ref<const Vector>& values) {
  Ordering order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] > values[b]; });
  return order;
}

Curves conditional_curves(const ValueFunction& nu, const Ordering& ordering) {
  const Index d = nu.dimension();
  check_permutation(ordering, d);
  const auto walker = nu.prefix_walker();
  Curves out;
  out.insertion = walk(*walker, ordering.begin(), ordering.end(), d);
  // Refining in reverse order visits nu(last k) for k = 0..d, which is the
  // deletion curve read backwards.
  out.deletion = walk(*walker, ordering.rbegin(), ordering.rend(), d).reverse();
  return out;
}

AbcScores abc_scores(const Eigen::Ref<const Vector>& insertion,
                     const Eigen::Ref<const Vector>& deletion) {
  if (insertion.size() != deletion.size() || insertion.size() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "insertion and deletion curves differ in length");
  }
  return {trapezoid_area(insertion) - chord_area(insertion),
          chord_area(deletion) - trapezoid_area(deletion)};
}

AbcReport evaluate_ordering(const ValueFunction& nu, const Ordering& ordering,
                            Index target_index) {
  Curves curves = conditional_curves(nu, ordering);
  const AbcScores scores = abc_scores(curves.insertion, curves.deletion);
  AbcReport report;
  report.target_index = target_index;
  report.ordering = ordering;
  report.insertion_curve = std::move(curves.insertion);
  report.deletion_curve = std::move(curves.deletion);
  report.abc_insertion = scores.insertion;
  report.abc_deletion = scores.deletion;
  return report;
}

MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

Ordering random_ordering(Index d, std::uint64_t seed) {
  Ordering order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(std::span<Index>(order));
  return order;
}

RandomBaseline random_ordering_baseline(const ValueFunction& nu, std::int64_t trials,
                                        std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "need at least one trial");
  const Index d = nu.dimension();
  Ordering order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  std::vector<double> ins, del, sum;
  for (std::int64_t t = 0; t < trials; ++t) {
    rng.shuffle(std::span<Index>(order));
    const Curves curves = conditional_curves(nu, order);
    const AbcScores s = abc_scores(curves.insertion, curves.deletion);
    ins.push_back(s.insertion);
    del.push_back(s.deletion);
    sum.push_back(s.sum());
  }
  return {mean_and_error(ins), mean_and_error(del), mean_and_error(sum), trials};
}

}  // namespace cohortig
