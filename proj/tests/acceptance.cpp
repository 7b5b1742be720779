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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cohortig/diagnostics.hpp"
#include "cohortig/evaluation.hpp"
#include "cohortig/igcs.hpp"
#include "cohortig/rng.hpp"
#include "cohortig/shapley.hpp"
#include "cohortig/similarity.hpp"
#include "cohortig/value_functions.hpp"
#include "support.hpp"

namespace cohortig {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Vector table_shapley(Index d, const std::vector<double>& table) {
  const FunctionValue nu(d, [&](const FeatureSet& u) { return table[testing::mask_from_subset(u)]; });
  return exact_shapley(nu).values;
}

// 1. Shapley axioms on random tabulated games.
void axioms(Outcome& o) {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  int games = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Index d = 3 + trial % 4;
    const std::size_t size = std::size_t{1} << d;
    const std::uint64_t dummy = std::uint64_t{1} << (d - 1);
    // Features 0 and 1 are exchangeable and feature d-1 is a dummy.
    std::vector<double> v(size);
    std::vector<double> w(size);
    for (std::size_t m = 0; m < size; ++m) {
      if (m & dummy) continue;
      const std::size_t swapped = (m & ~std::size_t{3}) | ((m & 1) << 1) | ((m >> 1) & 1);
      if (swapped < m) {
        v[m] = v[swapped];
        w[m] = w[swapped];
      } else {
        v[m] = normal(gen);
        w[m] = normal(gen);
      }
    }
    for (std::size_t m = 0; m < size; ++m) {
      if (m & dummy) {
        v[m] = v[m & ~dummy];
        w[m] = w[m & ~dummy];
      }
    }
    std::vector<double> sum(size);
    for (std::size_t m = 0; m < size; ++m) sum[m] = v[m] + w[m];

    const Vector pv = table_shapley(d, v);
    const Vector pw = table_shapley(d, w);
    const Vector ps = table_shapley(d, sum);
    worst = std::max(worst, std::abs(pv.sum() - (v[size - 1] - v[0])));
    worst = std::max(worst, std::abs(pv(d - 1)));
    worst = std::max(worst, std::abs(pv(0) - pv(1)));
    worst = std::max(worst, (ps - pv - pw).lpNorm<Eigen::Infinity>());
    ++games;
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= 1e-12, "axiom residual " + sci(worst));
  o.require(elapsed < 1.0, "runtime " + sci(elapsed) + " s");
  o.detail << games << " games, max residual " << sci(worst) << ", " << sci(elapsed) << " s";
}

// 2. Exact cohort Shapley equals the permutation average of cohort means
// computed directly from the data.
void cohort_oracle(Outcome& o) {
  const Dataset ds3 = testing::d3();
  const Vector phi3 = exact_shapley(CohortValue(testing::d3_profile(), ds3.responses)).values;
  o.require(phi3(0) == -0.25 && phi3(1) == -0.75, "D3 values");

  std::mt19937_64 gen(202);
  std::uniform_int_distribution<Index> size_n(2, 50);
  std::uniform_int_distribution<Index> size_d(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = size_n(gen);
    const Index d = size_d(gen);
    const Dataset ds = testing::random_dataset(gen, n, d, 2 + trial % 3);
    const Index t = static_cast<Index>(gen() % static_cast<std::uint64_t>(n));
    const auto profile = std::make_shared<const SimilarityProfile>(
        SimilarityProfile::build(ds, SimilaritySpec::with_default(ds, Equality{}), t));
    const Vector phi = exact_shapley(CohortValue(profile, ds.responses)).values;
    const Vector oracle = testing::permutation_shapley(
        d, [&](const FeatureSet& u) { return testing::direct_cohort_mean(ds, t, u); });
    worst = std::max(worst, (phi - oracle).lpNorm<Eigen::Infinity>());
  }
  o.require(worst <= 1e-12, "max deviation " + sci(worst));
  o.detail << "D3 (" << phi3(0) << ", " << phi3(1) << "), 50 datasets max deviation " << sci(worst);
}

SoftValue random_soft(std::mt19937_64& gen, Index n, Index d, double density) {
  std::normal_distribution<double> normal;
  Vector f(n);
  for (Index i = 0; i < n; ++i) f(i) = normal(gen);
  return SoftValue(std::make_shared<const SimilarityProfile>(SimilarityProfile::from_dissimilarity_sets(
                       0, d, testing::random_sets(gen, n, d, 0, density))),
                   f);
}

// 3. IGCS gradient, D3 limit and quadrature order.
void igcs_correctness(Outcome& o) {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  double fd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SoftValue sv = random_soft(gen, 30, 8, 0.3);
    Vector z(8);
    for (Index j = 0; j < 8; ++j) z(j) = unit(gen);
    const Vector grad = soft_gradient(sv, z);
    for (Index k = 0; k < 8; ++k) {
      Vector up = z;
      Vector down = z;
      up(k) += 1e-5;
      down(k) -= 1e-5;
      fd = std::max(fd, std::abs(grad(k) - (soft_value(sv, up) - soft_value(sv, down)) / 2e-5));
    }
  }
  o.require(fd <= 1e-6, "finite differences " + sci(fd));

  const Vector psi = igcs_attribution(SoftValue(testing::d3_profile(), testing::d3().responses), {1000}).values;
  const double d3_error = std::max(std::abs(psi(0) + 1.0 / 3.0), std::abs(psi(1) + 2.0 / 3.0));
  o.require(d3_error <= 1e-5, "D3 error " + sci(d3_error));

  double min_order = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10; ++trial) {
    const SoftValue sv = random_soft(gen, 200, 40, 0.1);
    const std::vector<int> steps = {10, 20, 40, 80};
    std::vector<double> x;
    std::vector<double> y;
    for (const int r : steps) {
      x.push_back(std::log(static_cast<double>(r)));
      y.push_back(std::log(std::abs(igcs_attribution(sv, {r}).efficiency_gap)));
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 4.0;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / 4.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
    }
    min_order = std::min(min_order, -sxy / sxx);
  }
  o.require(min_order >= 1.9, "order " + sci(min_order));
  o.detail << "fd residual " << sci(fd) << ", D3 error " << sci(d3_error) << ", min order "
           << sci(min_order);
}

// 4. Integrated gradients of multilinear functions equal the Shapley values
// of their corner restriction.
void multilinear(Outcome& o) {
  std::mt19937_64 gen(404);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + trial % 7;
    const std::size_t size = std::size_t{1} << d;
    std::vector<double> coef(size);
    for (auto& c : coef) c = normal(gen);
    PathFunction g;
    g.dimension = d;
    g.value = [&](const Vector& z) {
      double v = 0.0;
      for (std::size_t m = 0; m < size; ++m) {
        double term = coef[m];
        for (Index j = 0; j < d; ++j) {
          if ((m >> j) & 1U) term *= z(j);
        }
        v += term;
      }
      return v;
    };
    g.gradient = [&](const Vector& z) {
      Vector grad = Vector::Zero(d);
      for (std::size_t m = 0; m < size; ++m) {
        for (Index k = 0; k < d; ++k) {
          if (!((m >> k) & 1U)) continue;
          double term = coef[m];
          for (Index j = 0; j < d; ++j) {
            if (j != k && ((m >> j) & 1U)) term *= z(j);
          }
          grad(k) += term;
        }
      }
      return grad;
    };
    std::vector<double> corner(size);
    for (std::size_t u = 0; u < size; ++u) {
      Vector z(d);
      for (Index j = 0; j < d; ++j) z(j) = static_cast<double>((u >> j) & 1U);
      corner[u] = g.value(z);
    }
    const Vector ig = ig_of_function(g, {10000});
    worst = std::max(worst, (ig - table_shapley(d, corner)).lpNorm<Eigen::Infinity>());
  }
  o.require(worst <= 1e-6, "multilinear deviation " + sci(worst));

  // Product of h(z) = 1 + z^2 over |u| = 4 features.
  const Index d = 6;
  const std::vector<Index> u = {0, 1, 3, 5};
  PathFunction h;
  h.dimension = d;
  h.value = [&](const Vector& z) {
    double v = 1.0;
    for (const Index j : u) v *= 1.0 + z(j) * z(j);
    return v;
  };
  h.gradient = [&](const Vector& z) {
    Vector grad = Vector::Zero(d);
    for (const Index j : u) {
      double rest = 2.0 * z(j);
      for (const Index k : u) {
        if (k != j) rest *= 1.0 + z(k) * z(k);
      }
      grad(j) = rest;
    }
    return grad;
  };
  Vector expected = Vector::Zero(d);
  for (const Index j : u) expected(j) = (std::pow(2.0, 4) - 1.0) / 4.0;
  const double coarse = (ig_of_function(h, {1000}) - expected).lpNorm<Eigen::Infinity>();
  const double product = (ig_of_function(h, {10000}) - expected).lpNorm<Eigen::Infinity>();
  // The only residual is the midpoint rule's, so it must fall as R^-2.
  const double ratio = coarse / product;
  o.require(product <= 1e-6, "product-of-h deviation " + sci(product));
  o.require(ratio > 90.0 && ratio < 110.0, "product-of-h error ratio " + sci(ratio));
  o.detail << "multilinear max deviation " << sci(worst) << ", product-of-h deviation "
           << sci(product) << " (x" << sci(ratio) << " smaller than at R=1000)";
}

// 5. Mean of insertion plus deletion ABC over all orderings is zero.
void zero_sum(Outcome& o) {
  std::mt19937_64 gen(505);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + trial % 5;
    const Dataset ds = testing::random_dataset(gen, 40, d, 2);
    const auto profile = std::make_shared<const SimilarityProfile>(
        SimilarityProfile::build(ds, SimilaritySpec::with_default(ds, Equality{}), trial % 40));
    const CohortValue nu(profile, ds.responses);
    Ordering order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    double total = 0.0;
    double count = 0.0;
    do {
      const AbcReport r = evaluate_ordering(nu, order);
      total += r.abc_insertion + r.abc_deletion;
      count += 1.0;
    } while (std::next_permutation(order.begin(), order.end()));
    worst = std::max(worst, std::abs(total / count));
  }
  o.require(worst <= 1e-9, "mean " + sci(worst));
  o.detail << "20 datasets, max |mean(ins+del)| " << sci(worst);
}

SimilarityProfile fixed_size_profile(std::mt19937_64& gen, Index rows, Index d, double a) {
  const auto k = static_cast<Index>(std::floor(a * static_cast<double>(d)));
  std::vector<FeatureSet> sets(static_cast<std::size_t>(rows + 1), FeatureSet(static_cast<std::size_t>(d)));
  std::vector<Index> features(static_cast<std::size_t>(d));
  std::iota(features.begin(), features.end(), Index{0});
  std::uniform_int_distribution<Index> extra(0, d / 8);
  for (Index i = 1; i <= rows; ++i) {
    std::shuffle(features.begin(), features.end(), gen);
    const Index size = std::min(d, k + (i == 1 ? 0 : extra(gen)));
    for (Index m = 0; m < size; ++m) {
      sets[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(features[static_cast<std::size_t>(m)]));
    }
  }
  return SimilarityProfile::from_dissimilarity_sets(0, d, sets);
}

// 6. H_eps mass and corner fractions respect their bounds.
void convergence(Outcome& o) {
  std::mt19937_64 gen(606);
  double worst_margin = -std::numeric_limits<double>::infinity();
  int checks = 0;
  for (const double a : {0.25, 0.5}) {
    for (const Index d : {64, 128}) {
      for (const Index rows : {5, 50}) {
        for (const double eps : {0.01, 0.1, 0.5}) {
          const auto profile = fixed_size_profile(gen, rows, d, a);
          const ConvergenceReport r = heps_mass(profile, eps, 20000, derive_seed(7, checks));
          worst_margin = std::max(worst_margin, r.mc_mass - r.theorem_bound - 3.0 * r.mc_standard_error);
          ++checks;
        }
      }
    }
  }
  o.require(worst_margin <= 0.0, "mass exceeds bound by " + sci(worst_margin));

  int corner_checks = 0;
  double worst_corner = 0.0;
  for (const double a : {0.25, 0.5}) {
    for (const Index d : {8, 12, 16}) {
      for (const Index rows : {1, 4, 20}) {
        const CornerReport r = corner_convergence(fixed_size_profile(gen, rows, d, a));
        worst_corner = std::max(worst_corner, r.fraction / r.bound);
        ++corner_checks;
      }
    }
  }
  o.require(worst_corner <= 1.0, "corner fraction/bound " + sci(worst_corner));
  o.detail << checks << " MC checks, worst (mass - bound - 3se) " << sci(worst_margin) << "; "
           << corner_checks << " corner checks, worst fraction/bound " << sci(worst_corner);
}

// 7. Closed-form second-order weights against IG of the pair term.
void pair_weights(Outcome& o) {
  std::mt19937_64 gen(707);
  double worst_igcs = 0.0;
  double worst_cs = 0.0;
  int pairs = 0;
  while (pairs < 100) {
    const Index d = 2 + static_cast<Index>(gen() % 11);
    auto sets = testing::random_sets(gen, 3, d, 0, 0.4);
    const FeatureSet& ji = sets[1];
    const FeatureSet& jip = sets[2];
    if (ji.none() || jip.none()) continue;
    ++pairs;
    const FeatureSet both = ji & jip;
    const FeatureSet either = ji | jip;
    PathFunction g;
    g.dimension = d;
    g.value = [&](const Vector& z) {
      double v = 1.0;
      for_each_member(either, [&](Index j) { v *= 1.0 - z(j); });
      for_each_member(both, [&](Index j) { v *= 1.0 - z(j); });
      return v;
    };
    g.gradient = [&](const Vector& z) {
      const double v = g.value(z);
      Vector grad = Vector::Zero(d);
      for_each_member(either, [&](Index j) {
        const double power = both.test(static_cast<std::size_t>(j)) ? 2.0 : 1.0;
        grad(j) = -power * v / (1.0 - z(j));
      });
      return grad;
    };
    const PairWeights w = second_order_weights(ji, jip);
    // g(1) - g(0) = -1, so the weights are the negated attributions.
    worst_igcs = std::max(worst_igcs, (-ig_of_function(g, {10000}) - w.igcs).lpNorm<Eigen::Infinity>());
    std::vector<double> corner(std::size_t{1} << d);
    for (std::size_t u = 0; u < corner.size(); ++u) {
      corner[u] = (testing::mask_from_subset(either) & u) == 0 ? 1.0 : 0.0;
    }
    worst_cs = std::max(worst_cs, (-table_shapley(d, corner) - w.cs).lpNorm<Eigen::Infinity>());
  }
  o.require(worst_igcs <= 1e-6, "igcs weights " + sci(worst_igcs));
  o.require(worst_cs <= 1e-12, "cs weights " + sci(worst_cs));
  o.detail << pairs << " pairs, igcs deviation " << sci(worst_igcs) << ", cs deviation "
           << sci(worst_cs);
}

// Sparse binary data with an additive signal on a few features.
struct Synthetic {
  Dataset ds;
  std::vector<Index> targets;
};

Synthetic sparse_binary(Index n, Index d, Index signal, Index targets) {
  std::mt19937_64 gen(808);
  std::bernoulli_distribution active(0.03);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::uniform_real_distribution<double> magnitude(1.0, 2.0);
  Synthetic s;
  s.ds.features = Matrix::Zero(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) s.ds.features(i, j) = active(gen) ? 1.0 : 0.0;
  }
  std::vector<Index> features(static_cast<std::size_t>(d));
  std::iota(features.begin(), features.end(), Index{0});
  std::shuffle(features.begin(), features.end(), gen);
  Vector beta = Vector::Zero(d);
  for (Index k = 0; k < signal; ++k) {
    beta(features[static_cast<std::size_t>(k)]) = (k % 2 == 0 ? 1.0 : -1.0) * magnitude(gen);
  }
  s.ds.responses = s.ds.features * beta;
  for (Index i = 0; i < n; ++i) s.ds.responses(i) += noise(gen);
  for (Index j = 0; j < d; ++j) {
    s.ds.column_names.push_back("f" + std::to_string(j));
    s.ds.column_types.push_back(ColumnType::Numeric);
    s.ds.levels.emplace_back();
  }
  for (Index k = 0; k < targets; ++k) s.targets.push_back((k * 97) % n);
  return s;
}

struct MethodScore {
  std::string label;
  std::vector<double> insertion;
  std::vector<double> deletion;
  double seconds_per_target = 0.0;
};

// 8 and 9. IGCS against Monte Carlo cohort Shapley at matched wall-clock.
void table4(Outcome& o8, Outcome& o9) {
  const Synthetic s = sparse_binary(2000, 1024, 20, 16);
  const SimilaritySpec spec = SimilaritySpec::with_default(s.ds, Equality{});
  const auto count = s.targets.size();

  std::vector<std::shared_ptr<const SimilarityProfile>> profiles;
  MethodScore igcs{"igcs:50", {}, {}, 0.0};
  double worst_seconds = 0.0;
  for (const Index t : s.targets) {
    const auto start = Clock::now();
    auto profile = std::make_shared<const SimilarityProfile>(SimilarityProfile::build(s.ds, spec, t));
    const Attribution a = igcs_attribution(SoftValue(profile, s.ds.responses), {50});
    const double elapsed = seconds_since(start);
    worst_seconds = std::max(worst_seconds, elapsed);
    igcs.seconds_per_target += elapsed / static_cast<double>(count);
    const AbcReport r = evaluate_ordering(CohortValue(profile, s.ds.responses), variable_ordering(a), t);
    igcs.insertion.push_back(r.abc_insertion);
    igcs.deletion.push_back(r.abc_deletion);
    profiles.push_back(std::move(profile));
  }
  o9.require(worst_seconds <= 1.0, "slowest target " + sci(worst_seconds) + " s");
  o9.detail << "n=2000 d=1024 R=50: mean " << sci(igcs.seconds_per_target) << " s/target, max "
            << sci(worst_seconds) << " s";

  // Price one permutation, then size the Monte Carlo budgets.
  const CohortValue pilot(profiles.front(), s.ds.responses);
  const auto pilot_start = Clock::now();
  mc_shapley(pilot, {64, 1});
  const double per_permutation = seconds_since(pilot_start) / 64.0;
  const auto matched = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(igcs.seconds_per_target / per_permutation));

  std::vector<MethodScore> mc;
  for (const double factor : {0.25, 1.0, 4.0, 16.0}) {
    const auto samples = std::max<std::int64_t>(1, static_cast<std::int64_t>(factor * static_cast<double>(matched)));
    MethodScore score{"cs-mc:" + std::to_string(samples), {}, {}, 0.0};
    for (std::size_t k = 0; k < count; ++k) {
      const CohortValue nu(profiles[k], s.ds.responses);
      const auto start = Clock::now();
      const Attribution a = mc_shapley(nu, {samples, derive_seed(11, k)});
      score.seconds_per_target += seconds_since(start) / static_cast<double>(count);
      const AbcReport r = evaluate_ordering(nu, variable_ordering(a), s.targets[k]);
      score.insertion.push_back(r.abc_insertion);
      score.deletion.push_back(r.abc_deletion);
    }
    mc.push_back(std::move(score));
  }

  auto mean = [](const std::vector<double>& v) { return mean_and_error(v).mean; };
  const MethodScore& equal = mc[1];
  o8.require(mean(igcs.insertion) > mean(equal.insertion), "insertion ABC not higher");
  o8.require(mean(igcs.deletion) > mean(equal.deletion), "deletion ABC not higher");
  // Monotone within noise: paired differences between consecutive budgets.
  for (std::size_t b = 1; b < mc.size(); ++b) {
    std::vector<double> diff(count);
    for (std::size_t k = 0; k < count; ++k) {
      diff[k] = (mc[b].insertion[k] + mc[b].deletion[k]) - (mc[b - 1].insertion[k] + mc[b - 1].deletion[k]);
    }
    const MeanAndError step = mean_and_error(diff);
    o8.require(step.mean >= -2.0 * step.standard_error,
               mc[b].label + " below " + mc[b - 1].label + " beyond noise");
  }
  o8.require(mean(mc.back().insertion) + mean(mc.back().deletion) >
                 mean(mc.front().insertion) + mean(mc.front().deletion),
             "largest budget not above smallest");

  auto row = [&](const MethodScore& m) {
    const MeanAndError ins = mean_and_error(m.insertion);
    const MeanAndError del = mean_and_error(m.deletion);
    o8.detail << m.label << " ins " << sci(ins.mean) << "+-" << sci(ins.standard_error) << " del "
              << sci(del.mean) << "+-" << sci(del.standard_error) << " " << sci(m.seconds_per_target)
              << " s/target; ";
  };
  row(igcs);
  for (const auto& m : mc) row(m);
}

// 10. GKW conventions and efficiency.
void gkw(Outcome& o) {
  std::mt19937_64 gen(1010);
  std::normal_distribution<double> normal;
  double worst_gap = 0.0;
  bool mean_exact = true;
  bool weight_one = true;
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 5;
    const Index n = 50;
    Matrix x(n, d);
    Vector f(n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < d; ++j) x(i, j) = normal(gen);
      f(i) = x.row(i).sum() + normal(gen);
    }
    const auto model = std::make_shared<const GkwModel>(x, GkwOptions{0.5 + 0.1 * trial});
    const Index t = trial % n;
    const GkwValue nu(model, t, f);
    mean_exact = mean_exact && nu(FeatureSet(static_cast<std::size_t>(d))) == f.mean();
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << d); ++m) {
      weight_one = weight_one && nu.weights(testing::subset_from_mask(d, m))(t) == 1.0;
    }
    const Attribution a = exact_shapley(nu);
    worst_gap = std::max(worst_gap, std::abs(a.efficiency_gap));
  }
  o.require(mean_exact, "nu(empty) differs from the grand mean");
  o.require(weight_one, "target weight differs from 1");
  o.require(worst_gap <= 1e-9, "efficiency gap " + sci(worst_gap));
  o.detail << "10 datasets, max efficiency gap " << sci(worst_gap);
}

}  // namespace
}  // namespace cohortig

int main() {
  using cohortig::Outcome;
  std::vector<Outcome> outcomes(11);
  auto guarded = [&](int id, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      outcomes[static_cast<std::size_t>(id)].require(false, std::string("exception: ") + e.what());
    }
  };
  guarded(1, [&] { cohortig::axioms(outcomes[1]); });
  guarded(2, [&] { cohortig::cohort_oracle(outcomes[2]); });
  guarded(3, [&] { cohortig::igcs_correctness(outcomes[3]); });
  guarded(4, [&] { cohortig::multilinear(outcomes[4]); });
  guarded(5, [&] { cohortig::zero_sum(outcomes[5]); });
  guarded(6, [&] { cohortig::convergence(outcomes[6]); });
  guarded(7, [&] { cohortig::pair_weights(outcomes[7]); });
  guarded(8, [&] { cohortig::table4(outcomes[8], outcomes[9]); });
  guarded(10, [&] { cohortig::gkw(outcomes[10]); });

  const char* names[] = {"",
                         "Shapley axioms",
                         "cohort Shapley permutation oracle",
                         "IGCS gradient, limit and quadrature order",
                         "IG of multilinear functions",
                         "zero-sum ABC over all orderings",
                         "H_eps mass and corner bounds",
                         "second-order pair weights",
                         "IGCS vs Monte Carlo at equal wall-clock",
                         "IGCS runtime",
                         "GKW conventions"};
  int failures = 0;
  for (int id = 1; id <= 10; ++id) {
    const Outcome& o = outcomes[static_cast<std::size_t>(id)];
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " - " << names[id]
              << " [" << o.detail.str() << "]\n";
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
