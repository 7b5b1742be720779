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

#include "cohortig/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <vector>

#include "cohortig/rng.hpp"
#include "cohortig/value_functions.hpp"

namespace cohortig {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double heps_bound(double rows, double eps, double a, Index d) {
  const double steps = std::floor(a * static_cast<double>(d) + 1e-9);
  return rows * rows / eps * std::exp(-steps / 4.0);
}

ConvergenceReport heps_mass(const SimilarityProfile& profile, double eps, std::int64_t samples,
                            std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, 1)");
  }
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");

  const Index d = profile.d();
  const auto& counts = profile.dissimilarity_counts();
  ConvergenceReport report;
  report.target_index = profile.target();
  report.d = d;
  report.eps = eps;
  report.samples = samples;

  std::vector<std::vector<Index>> rows;  // J_i of the counted rows
  int min_count = std::numeric_limits<int>::max();
  int max_count = 0;
  for (Index i = 0; i < profile.n(); ++i) {
    if (i == profile.target()) continue;
    if (counts[i] == 0) {
      ++report.duplicates;
      continue;
    }
    min_count = std::min(min_count, counts[i]);
    max_count = std::max(max_count, counts[i]);
    auto& members = rows.emplace_back();
    for_each_member(profile.dissimilarity_set(i), [&](Index j) { members.push_back(j); });
  }
  report.other_rows = static_cast<Index>(rows.size());
  report.duplicate_regime = report.duplicates > 0;
  if (!rows.empty()) {
    report.a = static_cast<double>(min_count) / static_cast<double>(d);
    report.a_max = static_cast<double>(max_count) / static_cast<double>(d);
  }
  // With n1 copies of the target the soft mass is compared against n1 * eps.
  const double n1 = static_cast<double>(report.duplicates + 1);
  const double threshold = n1 * eps;

  Rng rng(seed);
  Vector z(d);
  std::int64_t inside = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Index j = 0; j < d; ++j) z[j] = rng.uniform01();
    double mass = 0.0;
    for (const auto& members : rows) {
      double prod = 1.0;
      for (Index j : members) prod *= 1.0 - z[j];
      mass += prod;
      if (mass >= threshold) break;
    }
    if (mass >= threshold) ++inside;
  }
  const double m = static_cast<double>(samples);
  report.mc_mass = static_cast<double>(inside) / m;
  report.mc_standard_error = std::sqrt(report.mc_mass * (1.0 - report.mc_mass) / m);
  report.theorem_bound = rows.empty() ? 0.0
                                      : heps_bound(static_cast<double>(rows.size()), threshold,
                                                   report.a, d);
  return report;
}

CornerReport corner_convergence(const SimilarityProfile& profile) {
  const Index d = profile.d();
  if (d > 20) {
    throw Error(ErrorKind::DimensionTooLarge,
                "corner enumeration needs d <= 20, got d = " + std::to_string(d));
  }
  const std::uint64_t corners = std::uint64_t{1} << d;
  const std::uint64_t all = corners - 1;
  std::vector<char> inside(corners, 0);
  Index others = 0;
  int min_count = std::numeric_limits<int>::max();
  for (Index i = 0; i < profile.n(); ++i) {
    if (i == profile.target()) continue;
    ++others;
    min_count = std::min(min_count, profile.dissimilarity_counts()[i]);
    std::uint64_t dissimilar = 0;
    for_each_member(profile.dissimilarity_set(i),
                    [&](Index j) { dissimilar |= std::uint64_t{1} << j; });
    inside[all & ~dissimilar] = 1;
  }
  // A corner u is inside iff u is a subset of some J_i complement: close the
  // marked complements downward.
  for (Index bit = 0; bit < d; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t u = 0; u < corners; ++u) {
      if ((u & b) && inside[u]) inside[u ^ b] = 1;
    }
  }
  CornerReport report;
  for (char c : inside) report.corners_inside += static_cast<std::uint64_t>(c);
  report.fraction = static_cast<double>(report.corners_inside) / static_cast<double>(corners);
  if (others > 0) {
    const double a = static_cast<double>(min_count) / static_cast<double>(d);
    report.bound = static_cast<double>(others) * std::exp2(-static_cast<double>(d) * a);
  }
  return report;
}

PairWeights second_order_weights(const FeatureSet& ji, const FeatureSet& jip) {
  if (ji.none() || jip.none()) {
    throw Error(ErrorKind::EmptyDissimSet, "pair weights need nonempty dissimilarity sets");
  }
  if (ji.size() != jip.size()) {
    throw Error(ErrorKind::DimensionMismatch, "dissimilarity sets differ in width");
  }
  const Index d = static_cast<Index>(ji.size());
  const FeatureSet both = ji & jip;
  const FeatureSet either = ji | jip;
  const FeatureSet one = ji ^ jip;
  const double union_size = static_cast<double>(either.count());
  const double igcs_denominator =
      2.0 * static_cast<double>(both.count()) + static_cast<double>(one.count());

  PairWeights w{Vector::Zero(d), Vector::Zero(d)};
  for_each_member(either, [&](Index j) { w.cs[j] = 1.0 / union_size; });
  for_each_member(both, [&](Index j) { w.igcs[j] = 2.0 / igcs_denominator; });
  for_each_member(one, [&](Index j) { w.igcs[j] = 1.0 / igcs_denominator; });
  return w;
}

double rank_correlation(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "rank vectors differ in size");
  const Index d = a.size();
  if (d < 2) return 1.0;
  Vector rank_a(d), rank_b(d);
  const Ordering oa = variable_ordering(a);
  const Ordering ob = variable_ordering(b);
  for (Index k = 0; k < d; ++k) {
    rank_a[oa[static_cast<std::size_t>(k)]] = static_cast<double>(k);
    rank_b[ob[static_cast<std::size_t>(k)]] = static_cast<double>(k);
  }
  const double dd = static_cast<double>(d);
  return 1.0 - 6.0 * (rank_a - rank_b).squaredNorm() / (dd * (dd * dd - 1.0));
}

ComparisonRecord cs_vs_igcs(const Dataset& ds, const SimilaritySpec& spec, Index target,
                            const ComparisonOptions& options) {
  auto profile = std::make_shared<const SimilarityProfile>(SimilarityProfile::build(ds, spec, target));
  const CohortValue nu(profile, ds.responses);
  ComparisonRecord record;
  record.target_index = target;
  record.exact_cs = ds.d() <= options.exact_max_dimension;

  auto start = std::chrono::steady_clock::now();
  if (record.exact_cs) {
    record.cs = exact_shapley(nu, {options.exact_max_dimension});
    record.cs.method = "cs-exact";
  } else {
    record.cs = mc_shapley(nu, {options.mc_samples, options.seed});
    record.cs.method = "cs-mc";
  }
  record.cs_seconds = seconds_since(start);
  record.cs.target_index = target;

  start = std::chrono::steady_clock::now();
  const SoftValue soft(profile, ds.responses);
  record.igcs = igcs_attribution(soft, options.quadrature);
  record.igcs_seconds = seconds_since(start);

  record.difference = record.cs.values - record.igcs.values;
  record.rank_correlation = rank_correlation(record.cs.values, record.igcs.values);
  const AbcReport cs_report = evaluate_ordering(nu, variable_ordering(record.cs), target);
  const AbcReport igcs_report = evaluate_ordering(nu, variable_ordering(record.igcs), target);
  record.cs_abc = {cs_report.abc_insertion, cs_report.abc_deletion};
  record.igcs_abc = {igcs_report.abc_insertion, igcs_report.abc_deletion};
  return record;
}

}  // namespace cohortig
