// Copyright 2026 The Smart Journey Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smartjourney/dataset.hpp"
#include "smartjourney/regressor.hpp"

namespace smartjourney {

struct BoostingConfig {
  int max_depth = 5;
  double min_child_weight = 4.0;
  double eta = 0.05;
  double subsample = 0.7;
  int num_rounds = 500;
  int early_stop_rounds = 15;
  double lambda = 1.0;  // L2 on leaf weights, Omega(f) = lambda/2 * sum(w^2)
};

/// Dense row-major feature table.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Flat node of a regression tree. Internal nodes send x left iff
/// x[feature] < threshold; leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  /// Raw leaf score f(x), before shrinkage.
  double score(std::span<const double> x) const;
  /// Index of the leaf x lands in.
  std::size_t leaf_index(std::span<const double> x) const;
  int depth() const;
  std::size_t leaf_count() const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Midpoint between two consecutive distinct sorted values, nudged so that
/// `low < threshold <= high` survives rounding.
double split_threshold(double low, double high);

/// Exact greedy tree growth on the rows in `rows` (indices into x, g, h).
/// At every node the best (feature, threshold) maximizes
///   gain = 1/2 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)]
/// over midpoints of consecutive distinct values; a node splits only when the
/// best gain is positive, both children keep sum(h) >= min_child_weight and the
/// depth cap allows it. Ties go to the lower feature index, then the lower
/// threshold. Leaves take w = -G/(H+l). Throws Error(kEmptyInput) for no rows.
RegressionTree build_tree(const FeatureMatrix& x, std::span<const std::size_t> rows,
                          std::span<const double> g, std::span<const double> h,
                          const BoostingConfig& config);

/// base_score + eta * sum_k f_k(x).
class GbdtEnsemble {
 public:
  GbdtEnsemble() = default;
  GbdtEnsemble(double base_score, double eta, std::size_t feature_count,
               std::vector<RegressionTree> trees = {})
      : base_score_(base_score), eta_(eta), feature_count_(feature_count), trees_(std::move(trees)) {}

  double predict(std::span<const double> x) const;

  double base_score() const { return base_score_; }
  double eta() const { return eta_; }
  std::size_t feature_count() const { return feature_count_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  void add_tree(RegressionTree tree) { trees_.push_back(std::move(tree)); }
  void truncate(std::size_t count) { trees_.resize(std::min(count, trees_.size())); }

  friend bool operator==(const GbdtEnsemble&, const GbdtEnsemble&) = default;

 private:
  double base_score_ = 0.0;
  double eta_ = 0.05;
  std::size_t feature_count_ = 0;
  std::vector<RegressionTree> trees_;
};

struct BoostingResult {
  GbdtEnsemble model;
  std::vector<double> train_rmse;       // after each round
  std::vector<double> validation_rmse;  // after each round
  std::size_t best_round = 0;           // 0-based; model keeps rounds [0, best_round]
};

/// Squared-error boosting: base score = mean training target; each round
/// draws ceil(subsample * N) rows without replacement, fits a tree to
/// g = yhat - y, h = 1 and adds eta * f(x). Stops once validation RMSE fails
/// to improve for early_stop_rounds consecutive rounds and keeps the best
/// prefix. With no validation rows every round is kept.
BoostingResult train_boosting(const FeatureMatrix& train_x, std::span<const double> train_y,
                              const FeatureMatrix& val_x, std::span<const double> val_y,
                              const BoostingConfig& config, std::uint64_t seed);

/// Row layout for a window: the W x F window flattened row by row, then the
/// target hour of day (0-23) and day of week (0 = Monday).
std::vector<double> tabular_features(const Matrix& window, Hour target_time);
FeatureMatrix tabular_matrix(std::span<const WindowedSample> samples);

/// Tree ensemble behind the Regressor interface.
class GbdtRegressor final : public Regressor {
 public:
  GbdtRegressor(GbdtEnsemble ensemble, std::size_t window, std::size_t features)
      : ensemble_(std::move(ensemble)), window_(window), features_(features) {}

  ModelType type() const override { return ModelType::kGbdt; }
  double predict(const Matrix& window, Hour target_time) const override;

  const GbdtEnsemble& ensemble() const { return ensemble_; }
  std::size_t window_length() const { return window_; }
  std::size_t feature_count() const { return features_; }

 private:
  GbdtEnsemble ensemble_;
  std::size_t window_;
  std::size_t features_;
};

}  // namespace smartjourney
