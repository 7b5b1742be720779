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

#include "cohortig/igcs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cohortig {
namespace {

// Nodes per batched sparse product; fixes the reduction tree as well.
constexpr Index kNodeChunk = 64;

void check_steps(int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one step");
}

}  // namespace

Vector QuadratureSpec::nodes() const {
  check_steps(steps);
  return (Vector::LinSpaced(steps, 1.0, static_cast<double>(steps)).array() - 0.5) /
         static_cast<double>(steps);
}

SoftValue::SoftValue(std::shared_ptr<const SimilarityProfile> profile, Vector responses)
    : profile_(std::move(profile)), responses_(std::move(responses)) {
  if (responses_.size() != profile_->n()) {
    throw Error(ErrorKind::DimensionMismatch, "responses and profile disagree on n");
  }
  std::map<int, std::pair<double, double>> groups;
  const auto& counts = profile_->dissimilarity_counts();
  for (Index i = 0; i < n(); ++i) {
    auto& [rows, total] = groups[counts[i]];
    rows += 1.0;
    total += responses_[i];
  }
  distinct_counts_.resize(static_cast<Index>(groups.size()));
  rows_per_count_.resize(distinct_counts_.size());
  response_sum_per_count_.resize(distinct_counts_.size());
  Index g = 0;
  for (const auto& [count, stats] : groups) {
    distinct_counts_[g] = count;
    rows_per_count_[g] = stats.first;
    response_sum_per_count_[g] = stats.second;
    ++g;
  }
}

double soft_value(const SoftValue& sv, const Eigen::Ref<const Vector>& z) {
  const Vector s = soft_similarity(sv.profile(), z);
  // Sequential sums so that corners reproduce the cohort mean bit-for-bit.
  double numerator = 0.0;
  double denominator = 0.0;
  for (Index i = 0; i < sv.n(); ++i) {
    numerator += sv.responses()[i] * s[i];
    denominator += s[i];
  }
  return numerator / denominator;
}

Vector soft_gradient(const SoftValue& sv, const Eigen::Ref<const Vector>& z) {
  check_unit_cube(z, sv.d());
  double b = 0.0;
  double c = 0.0;
  Vector d_sums = Vector::Zero(sv.d());
  Vector a_sums = Vector::Zero(sv.d());
  std::vector<Index> members;
  std::vector<double> prefix;
  for (Index i = 0; i < sv.n(); ++i) {
    members.clear();
    for_each_member(sv.profile().dissimilarity_set(i), [&](Index j) { members.push_back(j); });
    // prefix[m] = prod of the first m factors; the suffix product is carried
    // in the reverse sweep so that z_j = 1 needs no division.
    prefix.assign(members.size() + 1, 1.0);
    for (std::size_t m = 0; m < members.size(); ++m) {
      prefix[m + 1] = prefix[m] * (1.0 - z[members[m]]);
    }
    const double f = sv.responses()[i];
    const double s = prefix.back();
    b += s;
    c += f * s;
    double suffix = 1.0;
    for (std::size_t m = members.size(); m-- > 0;) {
      const double partial = -prefix[m] * suffix;
      d_sums[members[m]] += partial;
      a_sums[members[m]] += f * partial;
      suffix *= 1.0 - z[members[m]];
    }
  }
  return (a_sums * b - c * d_sums) / (b * b);
}

Vector DiagonalSums::gradient() const {
  return (a_sums * denominator - numerator * d_sums) / (denominator * denominator);
}

DiagonalSums diagonal_fast_path(const SoftValue& sv, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::ZOutOfRange, "alpha must lie in [0, 1]");
  }
  const double p = 1.0 - alpha;
  DiagonalSums out;
  const auto& counts = sv.distinct_counts();
  for (Index g = 0; g < counts.size(); ++g) {
    // std::pow(0, 0) == 1: rows fully similar to the target keep weight 1.
    const double power = std::pow(p, counts[g]);
    out.denominator += sv.rows_per_count()[g] * power;
    out.numerator += sv.response_sum_per_count()[g] * power;
  }
  const auto& row_counts = sv.profile().dissimilarity_counts();
  Matrix weights(sv.n(), 2);
  for (Index i = 0; i < sv.n(); ++i) {
    const double w = row_counts[i] > 0 ? std::pow(p, row_counts[i] - 1) : 0.0;
    weights(i, 0) = w;
    weights(i, 1) = w * sv.responses()[i];
  }
  const Matrix sums = -(sv.profile().incidence().transpose() * weights);
  out.d_sums = sums.col(0);
  out.a_sums = sums.col(1);
  return out;
}

Attribution igcs_attribution(const SoftValue& sv, const QuadratureSpec& quad) {
  const Vector nodes = quad.nodes();
  const Index steps = nodes.size();
  const Index n = sv.n();
  const Index d = sv.d();
  const auto& counts = sv.distinct_counts();
  const auto& row_counts = sv.profile().dissimilarity_counts();

  // Position of each row's |J_i| among the distinct counts.
  Eigen::VectorXi group_of(n);
  for (Index i = 0; i < n; ++i) {
    group_of[i] = static_cast<int>(std::lower_bound(counts.data(), counts.data() + counts.size(),
                                                    row_counts[i]) -
                                   counts.data());
  }

  Matrix chunk_totals(d, (steps + kNodeChunk - 1) / kNodeChunk);
  Vector lower_powers(counts.size());
  for (Index start = 0, chunk = 0; start < steps; start += kNodeChunk, ++chunk) {
    const Index width = std::min(kNodeChunk, steps - start);
    Matrix weights(n, 2 * width);
    Vector denominators(width);
    Vector numerators(width);
    for (Index r = 0; r < width; ++r) {
      const double p = 1.0 - nodes[start + r];
      double b = 0.0;
      double c = 0.0;
      for (Index g = 0; g < counts.size(); ++g) {
        const double power = std::pow(p, counts[g]);
        b += sv.rows_per_count()[g] * power;
        c += sv.response_sum_per_count()[g] * power;
        lower_powers[g] = counts[g] > 0 ? std::pow(p, counts[g] - 1) : 0.0;
      }
      denominators[r] = b;
      numerators[r] = c;
      for (Index i = 0; i < n; ++i) {
        const double w = lower_powers[group_of[i]];
        weights(i, 2 * r) = w;
        weights(i, 2 * r + 1) = w * sv.responses()[i];
      }
    }
    const Matrix sums = sv.profile().incidence().transpose() * weights;
    Matrix gradients(d, width);
    for (Index r = 0; r < width; ++r) {
      const double b = denominators[r];
      // D_k and A_k carry a minus sign relative to `sums`.
      gradients.col(r) = (numerators[r] * sums.col(2 * r) - b * sums.col(2 * r + 1)) / (b * b);
    }
    chunk_totals.col(chunk) = pairwise_column_sum(gradients);
  }

  Attribution out;
  out.method = "igcs";
  out.target_index = sv.profile().target();
  out.values = pairwise_column_sum(chunk_totals) / static_cast<double>(steps);
  double total = 0.0;
  double refined_total = 0.0;
  Index refined = 0;
  for (Index i = 0; i < n; ++i) {
    total += sv.responses()[i];
    if (row_counts[i] == 0) {
      refined_total += sv.responses()[i];
      ++refined;
    }
  }
  out.nu_empty = total / static_cast<double>(n);
  out.nu_full = refined_total / static_cast<double>(refined);
  out.meta.steps = quad.steps;
  out.finalize_gap();
  return out;
}

Vector ig_of_function(const PathFunction& g, const QuadratureSpec& quad) {
  check_steps(quad.steps);
  const Index d = g.dimension;
  if (d < 1 || (!g.value && !g.gradient)) {
    throw Error(ErrorKind::InvalidArgument, "path function needs a dimension and an evaluator");
  }
  const int steps = quad.steps;
  if (g.gradient) {
    const Vector nodes = quad.nodes();
    Matrix grads(d, steps);
    for (int r = 0; r < steps; ++r) {
      const Vector grad = g.gradient(Vector::Constant(d, nodes[r]));
      if (grad.size() != d) {
        throw Error(ErrorKind::DimensionMismatch, "gradient evaluator returned wrong size");
      }
      grads.col(r) = grad;
    }
    return pairwise_column_sum(grads) / static_cast<double>(steps);
  }
  Matrix increments(d, steps);
  for (int r = 0; r < steps; ++r) {
    const double alpha = static_cast<double>(r) / steps;
    const Vector base = Vector::Constant(d, alpha);
    const double g_base = g.value(base);
    for (Index j = 0; j < d; ++j) {
      Vector moved = base;
      moved[j] = static_cast<double>(r + 1) / steps;
      increments(j, r) = g.value(moved) - g_base;
    }
  }
  return pairwise_column_sum(increments);
}

}  // namespace cohortig
