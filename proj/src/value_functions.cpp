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

#include "cohortig/value_functions.hpp"

#include <cmath>
#include <vector>

namespace cohortig {
namespace {

enum class CohortStatistic { Mean, NegLog2Count };

double reduce(CohortStatistic stat, double sum, Index count) {
  if (stat == CohortStatistic::Mean) return sum / static_cast<double>(count);
  return -std::log2(static_cast<double>(count));
}

// Gray-code walker: tracks how many features of u each row violates; a row is
// in the cohort while that count is zero. Toggling j touches only the rows
// dissimilar on j. The running sum is compensated (Neumaier) since it is
// updated by both additions and removals over up to 2^d steps.
class CohortSubsetWalker final : public SubsetWalker {
 public:
  CohortSubsetWalker(const SimilarityProfile& profile, const Vector* responses,
                     CohortStatistic stat)
      : profile_(profile), responses_(responses), stat_(stat),
        violations_(static_cast<std::size_t>(profile.n())),
        in_u_(static_cast<std::size_t>(profile.d())) {
    reset();
  }

  void reset() override {
    std::fill(violations_.begin(), violations_.end(), 0);
    in_u_.reset();
    sum_ = 0.0;
    compensation_ = 0.0;
    count_ = profile_.n();
    if (responses_ != nullptr) {
      for (Index i = 0; i < profile_.n(); ++i) add((*responses_)[i]);
    }
  }

  void toggle(Index j) override {
    const bool adding = !in_u_.test(static_cast<std::size_t>(j));
    in_u_.flip(static_cast<std::size_t>(j));
    for (Incidence::InnerIterator it(profile_.incidence(), j); it; ++it) {
      const auto i = static_cast<std::size_t>(it.row());
      if (adding) {
        if (violations_[i]++ == 0) leave(it.row());
      } else {
        if (--violations_[i] == 0) join(it.row());
      }
    }
  }

  double value() const override { return reduce(stat_, sum_ + compensation_, count_); }

 private:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void leave(Index i) {
    --count_;
    if (responses_ != nullptr) add(-(*responses_)[i]);
  }
  void join(Index i) {
    ++count_;
    if (responses_ != nullptr) add((*responses_)[i]);
  }

  const SimilarityProfile& profile_;
  const Vector* responses_;
  CohortStatistic stat_;
  std::vector<int> violations_;
  FeatureSet in_u_;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  Index count_ = 0;
};

// Prefix walker: the cohort as an explicit row list, filtered feature by
// feature. The statistic is recomputed from the list in row order, so values
// agree bit-for-bit with direct evaluation.
class CohortPrefixWalker final : public PrefixWalker {
 public:
  CohortPrefixWalker(const SimilarityProfile& profile, const Vector* responses,
                     CohortStatistic stat)
      : profile_(profile), responses_(responses), stat_(stat) {
    reset();
  }

  void reset() override {
    members_.resize(static_cast<std::size_t>(profile_.n()));
    for (Index i = 0; i < profile_.n(); ++i) members_[static_cast<std::size_t>(i)] = i;
    recompute();
  }

  void refine(Index j) override {
    std::erase_if(members_, [&](Index i) { return !profile_.similar(i, j); });
    recompute();
  }

  double value() const override { return value_; }

 private:
  void recompute() {
    double sum = 0.0;
    if (responses_ != nullptr) {
      for (Index i : members_) sum += (*responses_)[i];
    }
    value_ = reduce(stat_, sum, static_cast<Index>(members_.size()));
  }

  const SimilarityProfile& profile_;
  const Vector* responses_;
  CohortStatistic stat_;
  std::vector<Index> members_;
  double value_ = 0.0;
};

void check_width(const FeatureSet& u, Index d) {
  if (static_cast<Index>(u.size()) != d) {
    throw Error(ErrorKind::DimensionMismatch, "feature subset has " + std::to_string(u.size()) +
                                                  " bits, expected " + std::to_string(d));
  }
}

}  // namespace

// --- CohortValue ------------------------------------------------------------

CohortValue::CohortValue(std::shared_ptr<const SimilarityProfile> profile, Vector responses)
    : profile_(std::move(profile)), responses_(std::move(responses)) {
  if (responses_.size() != profile_->n()) {
    throw Error(ErrorKind::DimensionMismatch, "responses and profile disagree on n");
  }
}

double CohortValue::operator()(const FeatureSet& u) const {
  check_width(u, dimension());
  double sum = 0.0;
  Index count = 0;
  for (Index i = 0; i < profile_->n(); ++i) {
    if (!profile_->dissimilarity_set(i).intersects(u)) {
      sum += responses_[i];
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

std::unique_ptr<SubsetWalker> CohortValue::subset_walker() const {
  return std::make_unique<CohortSubsetWalker>(*profile_, &responses_, CohortStatistic::Mean);
}

std::unique_ptr<PrefixWalker> CohortValue::prefix_walker() const {
  return std::make_unique<CohortPrefixWalker>(*profile_, &responses_, CohortStatistic::Mean);
}

// --- UniquenessValue --------------------------------------------------------

UniquenessValue::UniquenessValue(std::shared_ptr<const SimilarityProfile> profile)
    : profile_(std::move(profile)) {}

double UniquenessValue::operator()(const FeatureSet& u) const {
  check_width(u, dimension());
  Index count = 0;
  for (Index i = 0; i < profile_->n(); ++i) {
    if (!profile_->dissimilarity_set(i).intersects(u)) ++count;
  }
  return -std::log2(static_cast<double>(count));
}

std::unique_ptr<SubsetWalker> UniquenessValue::subset_walker() const {
  return std::make_unique<CohortSubsetWalker>(*profile_, nullptr, CohortStatistic::NegLog2Count);
}

std::unique_ptr<PrefixWalker> UniquenessValue::prefix_walker() const {
  return std::make_unique<CohortPrefixWalker>(*profile_, nullptr, CohortStatistic::NegLog2Count);
}

// --- GKW --------------------------------------------------------------------

namespace {

Matrix numeric_features(const Dataset& ds) {
  for (std::size_t j = 0; j < ds.column_types.size(); ++j) {
    if (ds.column_types[j] != ColumnType::Numeric) {
      throw Error(ErrorKind::CategoricalFeatureUnsupported,
                  "GKW needs numeric features; column '" + ds.column_names[j] +
                      "' is categorical");
    }
  }
  return ds.features;
}

}  // namespace

GkwModel::GkwModel(const Dataset& ds, const GkwOptions& options)
    : GkwModel(numeric_features(ds), options) {}

GkwModel::GkwModel(const Matrix& features, const GkwOptions& options) : options_(options) {
  if (!(options_.sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "GKW sigma must be > 0");
  if (!(options_.ridge >= 0.0)) throw Error(ErrorKind::InvalidArgument, "GKW ridge must be >= 0");
  const Index n = features.rows();
  const Index d = features.cols();
  standardized_ = features.rowwise() - features.colwise().mean();
  if (n > 1) {
    for (Index j = 0; j < d; ++j) {
      const double sd = std::sqrt(standardized_.col(j).squaredNorm() / static_cast<double>(n - 1));
      if (sd > 0.0) standardized_.col(j) /= sd;
    }
    covariance_ = (standardized_.transpose() * standardized_) / static_cast<double>(n - 1);
  } else {
    covariance_ = Matrix::Zero(d, d);
  }
  const double ridge = options_.ridge * covariance_.trace() / static_cast<double>(d);
  covariance_.diagonal().array() += ridge;
}

std::shared_ptr<const Eigen::LLT<Matrix>> GkwModel::factor(const FeatureSet& u) const {
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(u); it != cache_.end()) return it->second;
  }
  std::vector<Index> idx;
  for_each_member(u, [&](Index j) { idx.push_back(j); });
  auto llt = std::make_shared<Eigen::LLT<Matrix>>(covariance_(idx, idx));
  if (llt->info() != Eigen::Success) {
    throw Error(ErrorKind::SingularCovariance,
                "covariance submatrix is not positive definite after regularization");
  }
  std::lock_guard lock(cache_mutex_);
  if (cache_.size() < options_.cache_capacity) cache_.emplace(u, llt);
  return llt;
}

Vector GkwModel::squared_distances(const FeatureSet& u, Index target) const {
  check_width(u, d());
  if (target < 0 || target >= n()) {
    throw Error(ErrorKind::TargetOutOfRange, "GKW target outside the data");
  }
  const auto k = static_cast<Index>(u.count());
  if (k == 0) return Vector::Zero(n());
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(k));
  for_each_member(u, [&](Index j) { idx.push_back(j); });

  const auto llt = factor(u);
  // Rows of `diff` are x_{i,u} - x_{t,u}; distances come from L^{-1} diff^T.
  const Matrix sub = standardized_(Eigen::all, idx);
  const Matrix diff = sub.rowwise() - sub.row(target);
  const Matrix solved = llt->matrixL().solve(diff.transpose());
  return solved.colwise().squaredNorm().transpose() / static_cast<double>(k);
}

GkwValue::GkwValue(std::shared_ptr<const GkwModel> model, Index target, Vector responses)
    : model_(std::move(model)), target_(target), responses_(std::move(responses)) {
  if (responses_.size() != model_->n()) {
    throw Error(ErrorKind::DimensionMismatch, "responses and GKW features disagree on n");
  }
  if (target_ < 0 || target_ >= model_->n()) {
    throw Error(ErrorKind::TargetOutOfRange, "GKW target outside the data");
  }
}

Vector GkwValue::weights(const FeatureSet& u) const {
  if (u.none()) return Vector::Ones(model_->n());
  const double sigma = model_->options().sigma;
  const Vector d2 = model_->squared_distances(u, target_);
  return (-d2.array() / (2.0 * sigma * sigma)).exp();
}

double GkwValue::operator()(const FeatureSet& u) const {
  if (static_cast<Index>(u.size()) == dimension() && u.none()) return responses_.mean();
  const Vector w = weights(u);
  return w.dot(responses_) / w.sum();
}

}  // namespace cohortig
