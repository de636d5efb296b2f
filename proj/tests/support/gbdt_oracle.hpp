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

#include <memory>
#include <string>
#include <vector>

#include "smartjourney/gbdt.hpp"

namespace smartjourney::testing {

/// Node of a tree grown by brute-force recursive split enumeration.
struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  double weight = 0.0;
  std::unique_ptr<OracleNode> left, right;
};

/// Exhaustive split search over every feature and every midpoint of
/// neighbouring distinct values, evaluated by direct summation.
std::unique_ptr<OracleNode> oracle_tree(const FeatureMatrix& x, const std::vector<std::size_t>& rows,
                                        const std::vector<double>& g, const std::vector<double>& h,
                                        const BoostingConfig& config, int depth = 0);

/// Empty when `tree` (from node `index`) equals the oracle: same features,
/// thresholds within 1e-12 relative, bit-equal leaf weights. Otherwise the
/// path and reason of the first difference.
std::string tree_difference(const RegressionTree& tree, int index, const OracleNode& oracle,
                            const std::string& path = "root");

}  // namespace smartjourney::testing
