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

#include "smartjourney/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smartjourney/error.hpp"

namespace smartjourney {

double RegressionTree::score(std::span<const double> x) const {
  return nodes_[leaf_index(x)].weight;
}

std::size_t RegressionTree::leaf_index(std::span<const double> x) const {
  std::size_t n = 0;
  while (!nodes_[n].is_leaf()) {
    const TreeNode& node = nodes_[n];
    n = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                                          : node.right);
  }
  return n;
}

int RegressionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  // Children always follow their parent in the node list.
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    deepest = std::max(deepest, depth[n]);
    if (!nodes_[n].is_leaf()) {
      depth[static_cast<std::size_t>(nodes_[n].left)] = depth[n] + 1;
      depth[static_cast<std::size_t>(nodes_[n].right)] = depth[n] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double split_threshold(double low, double high) {
  double mid = low + (high - low) / 2.0;
  if (!std::isfinite(mid)) mid = low / 2.0 + high / 2.0;  // high - low overflowed
  return mid > low && mid <= high ? mid : high;
}

namespace {

using SortedOrders = std::vector<std::vector<std::uint32_t>>;

SortedOrders presort(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  SortedOrders orders(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& order = orders[f];
    order.assign(rows.begin(), rows.end());
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const double va = x(a, f), vb = x(b, f);
      return va < vb || (va == vb && a < b);
    });
  }
  return orders;
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

/// Level-wise exact greedy growth over global presorted orders. Rows outside
/// the tree carry node id -1 and are skipped during scans.
RegressionTree grow(const FeatureMatrix& x, const SortedOrders& orders, std::vector<int>& node_of_row,
                    std::span<const double> g, std::span<const double> h, const BoostingConfig& cfg) {
  const double lambda = cfg.lambda;
  std::vector<TreeNode> nodes(1);
  std::vector<int> frontier{0};

  auto node_sums = [&](std::size_t count) {
    std::vector<double> gs(count, 0.0), hs(count, 0.0);
    for (std::size_t r = 0; r < node_of_row.size(); ++r) {
      const int n = node_of_row[r];
      if (n >= 0) {
        gs[static_cast<std::size_t>(n)] += g[r];
        hs[static_cast<std::size_t>(n)] += h[r];
      }
    }
    return std::pair{gs, hs};
  };

  for (int depth = 0; depth < cfg.max_depth && !frontier.empty(); ++depth) {
    const auto [G, H] = node_sums(nodes.size());
    std::vector<char> active(nodes.size(), 0);
    for (int n : frontier) active[static_cast<std::size_t>(n)] = 1;

    std::vector<SplitCandidate> best(nodes.size());
    std::vector<double> gl(nodes.size()), hl(nodes.size()), last(nodes.size());
    std::vector<char> seen(nodes.size());
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (int n : frontier) {
        const auto k = static_cast<std::size_t>(n);
        gl[k] = hl[k] = 0.0;
        seen[k] = 0;
      }
      for (std::uint32_t r : orders[f]) {
        const int n = node_of_row[r];
        if (n < 0 || !active[static_cast<std::size_t>(n)]) continue;
        const auto k = static_cast<std::size_t>(n);
        const double v = x(r, f);
        if (seen[k] && v > last[k]) {
          const double gr = G[k] - gl[k];
          const double hr = H[k] - hl[k];
          if (hl[k] >= cfg.min_child_weight && hr >= cfg.min_child_weight) {
            const double gain = 0.5 * (gl[k] * gl[k] / (hl[k] + lambda) + gr * gr / (hr + lambda) -
                                       G[k] * G[k] / (H[k] + lambda));
            if (gain > best[k].gain) best[k] = {gain, static_cast<int>(f), split_threshold(last[k], v)};
          }
        }
        gl[k] += g[r];
        hl[k] += h[r];
        last[k] = v;
        seen[k] = 1;
      }
    }

    std::vector<int> next;
    std::vector<int> left_of(nodes.size(), -1);
    for (int n : frontier) {
      const auto k = static_cast<std::size_t>(n);
      if (best[k].feature < 0) continue;
      const int left = static_cast<int>(nodes.size());
      nodes.push_back({});
      nodes.push_back({});
      nodes[k].feature = best[k].feature;
      nodes[k].threshold = best[k].threshold;
      nodes[k].left = left;
      nodes[k].right = left + 1;
      left_of[k] = left;
      next.push_back(left);
      next.push_back(left + 1);
    }
    for (std::size_t r = 0; r < node_of_row.size(); ++r) {
      const int n = node_of_row[r];
      if (n < 0 || left_of.size() <= static_cast<std::size_t>(n) || left_of[static_cast<std::size_t>(n)] < 0) {
        continue;
      }
      const TreeNode& node = nodes[static_cast<std::size_t>(n)];
      node_of_row[r] = x(r, static_cast<std::size_t>(node.feature)) < node.threshold ? node.left : node.right;
    }
    frontier = std::move(next);
  }

  // Leaf weights from the rows each leaf finally holds, summed in row order.
  const auto [G, H] = node_sums(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].is_leaf()) nodes[k].weight = -G[k] / (H[k] + lambda);
  }
  return RegressionTree(std::move(nodes));
}

double rmse(std::span<const double> pred, std::span<const double> y) {
  if (y.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (pred[i] - y[i]) * (pred[i] - y[i]);
  return std::sqrt(s / static_cast<double>(y.size()));
}

}  // namespace

RegressionTree build_tree(const FeatureMatrix& x, std::span<const std::size_t> rows,
                          std::span<const double> g, std::span<const double> h,
                          const BoostingConfig& config) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "build_tree needs at least one row");
  if (g.size() != x.rows() || h.size() != x.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "gradient/hessian length must equal the row count");
  }
  const SortedOrders orders = presort(x, rows);
  std::vector<int> node_of_row(x.rows(), -1);
  for (std::size_t r : rows) node_of_row[r] = 0;
  return grow(x, orders, node_of_row, g, h, config);
}

double GbdtEnsemble::predict(std::span<const double> x) const {
  if (x.size() != feature_count_) {
    throw Error(ErrorCode::kFeatureMismatch, "expected " + std::to_string(feature_count_) +
                                                 " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.score(x);
  return base_score_ + eta_ * sum;
}

BoostingResult train_boosting(const FeatureMatrix& train_x, std::span<const double> train_y,
                              const FeatureMatrix& val_x, std::span<const double> val_y,
                              const BoostingConfig& config, std::uint64_t seed) {
  const std::size_t n = train_x.rows();
  if (n == 0 || train_y.size() != n) throw Error(ErrorCode::kEmptyInput, "empty training split");
  if (val_y.size() != val_x.rows()) throw Error(ErrorCode::kInvalidArgument, "validation size mismatch");
  if (!(config.subsample > 0.0 && config.subsample <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "subsample must lie in (0, 1]");
  }

  const double base = std::accumulate(train_y.begin(), train_y.end(), 0.0) / static_cast<double>(n);
  BoostingResult result{GbdtEnsemble(base, config.eta, train_x.cols()), {}, {}, 0};

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const SortedOrders orders = presort(train_x, all);

  std::vector<double> pred_train(n, base), pred_val(val_y.size(), base);
  std::vector<double> g(n), h(n, 1.0);
  std::vector<int> node_of_row(n);
  const auto n_sub = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(config.subsample * static_cast<double>(n) - 1e-9)), 1, n);
  Rng rng(seed);
  std::vector<std::size_t> perm = all;

  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int round = 0; round < config.num_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) g[i] = pred_train[i] - train_y[i];
    std::fill(node_of_row.begin(), node_of_row.end(), -1);
    if (n_sub == n) {
      std::fill(node_of_row.begin(), node_of_row.end(), 0);
    } else {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = 0; i < n_sub; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(perm[i], perm[pick(rng)]);
      }
      for (std::size_t i = 0; i < n_sub; ++i) node_of_row[perm[i]] = 0;
    }
    RegressionTree tree = grow(train_x, orders, node_of_row, g, h, config);

    for (std::size_t i = 0; i < n; ++i) pred_train[i] += config.eta * tree.score(train_x.row(i));
    for (std::size_t i = 0; i < val_y.size(); ++i) pred_val[i] += config.eta * tree.score(val_x.row(i));
    result.model.add_tree(std::move(tree));
    result.train_rmse.push_back(rmse(pred_train, train_y));

    if (val_y.empty()) {
      result.best_round = static_cast<std::size_t>(round);
      continue;
    }
    const double val = rmse(pred_val, val_y);
    result.validation_rmse.push_back(val);
    if (val < best_val) {
      best_val = val;
      result.best_round = static_cast<std::size_t>(round);
      since_best = 0;
    } else if (++since_best >= config.early_stop_rounds) {
      break;
    }
  }
  result.model.truncate(result.best_round + 1);
  return result;
}

std::vector<double> tabular_features(const Matrix& window, Hour target_time) {
  std::vector<double> out(window.data(), window.data() + window.size());
  out.push_back(static_cast<double>(hour_of_day(target_time)));
  out.push_back(static_cast<double>(day_of_week(target_time)));
  return out;
}

FeatureMatrix tabular_matrix(std::span<const WindowedSample> samples) {
  if (samples.empty()) return {};
  const std::size_t cols = static_cast<std::size_t>(samples.front().inputs.size()) + 2;
  FeatureMatrix m(samples.size(), cols);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = tabular_features(samples[i].inputs, samples[i].target_timestamp);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
  }
  return m;
}

double GbdtRegressor::predict(const Matrix& window, Hour target_time) const {
  if (static_cast<std::size_t>(window.rows()) != window_ ||
      static_cast<std::size_t>(window.cols()) != features_) {
    throw Error(ErrorCode::kFeatureMismatch, "window shape does not match the ensemble");
  }
  return ensemble_.predict(tabular_features(window, target_time));
}

}  // namespace smartjourney
