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

#ifndef COHORTIG_DIAGNOSTICS_HPP_
#define COHORTIG_DIAGNOSTICS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "cohortig/dataset.hpp"
#include "cohortig/evaluation.hpp"
#include "cohortig/igcs.hpp"
#include "cohortig/similarity.hpp"

namespace cohortig {

// How far the soft cohort mean is from its first-order (multilinear) Taylor
// term. H_eps is the part of the cube where the non-target soft mass
// sum_{i != t} prod_{j in J_i} (1 - z_j) reaches eps; the expansion can only
// fail there.
//
// When rows other than the target are fully similar to it (duplicates), the
// soft mass is taken relative to the n1 rows identical to the target and the
// dissimilarity fractions are computed over the remaining rows.
struct ConvergenceReport {
  Index target_index = -1;
  Index d = 0;
  Index other_rows = 0;          // rows counted in the bounds
  Index duplicates = 0;          // non-target rows with J_i empty
  bool duplicate_regime = false;
  double a = 0.0;                // min |J_i| / d over the counted rows
  double a_max = 0.0;            // max |J_i| / d
  double eps = 0.0;
  std::int64_t samples = 0;
  double mc_mass = 0.0;          // estimated Pr(z in H_eps), z ~ U[0,1]^d
  double mc_standard_error = 0.0;
  double theorem_bound = 0.0;    // other_rows^2 / eps * exp(-floor(a d) / 4)
  std::optional<double> corner_fraction;
  std::optional<double> corner_bound;
};

/// n^2 / eps * exp(-floor(a d) / 4).
double heps_bound(double rows, double eps, double a, Index d);

ConvergenceReport heps_mass(const SimilarityProfile& profile, double eps, std::int64_t samples,
                            std::uint64_t seed);

struct CornerReport {
  double fraction = 0.0;  // share of the 2^d corners inside H_eps
  double bound = 0.0;     // n 2^(-d a), n the number of non-target rows
  std::uint64_t corners_inside = 0;
};

/// Exhaustive over the 2^d corners; d <= 20. A corner 1_u:0_{-u} is inside
/// when some non-target row has J_i disjoint from u.
CornerReport corner_convergence(const SimilarityProfile& profile);

struct PairWeights {
  Vector cs;    // 1 / |J_i u J_i'| on the union
  Vector igcs;  // 2 / (2|cap| + |sym diff|) on the intersection, 1 / (...) on the rest
};

/// CS and IGCS attributions of the second-order pair term
/// g(z) = prod_{j in J_i} (1 - z_j) prod_{j in J_i'} (1 - z_j), signed to
/// explain g(0) - g(1) = 1.
PairWeights second_order_weights(const FeatureSet& ji, const FeatureSet& jip);

struct ComparisonRecord {
  Index target_index = -1;
  bool exact_cs = false;
  Attribution cs;
  Attribution igcs;
  Vector difference;  // cs - igcs
  double rank_correlation = 0.0;
  AbcScores cs_abc;
  AbcScores igcs_abc;
  double cs_seconds = 0.0;
  double igcs_seconds = 0.0;
};

struct ComparisonOptions {
  QuadratureSpec quadrature;
  Index exact_max_dimension = 25;
  std::int64_t mc_samples = 1000;
  std::uint64_t seed = 0;
};

/// CS (exact when d allows, otherwise Monte Carlo) against IGCS for one target.
ComparisonRecord cs_vs_igcs(const Dataset& ds, const SimilaritySpec& spec, Index target,
                            const ComparisonOptions& options);

/// Spearman correlation of two attribution vectors via their orderings.
double rank_correlation(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

}  // namespace cohortig

#endif  // COHORTIG_DIAGNOSTICS_HPP_
