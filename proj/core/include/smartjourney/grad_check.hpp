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
#include <functional>

#include "smartjourney/tensor.hpp"

namespace smartjourney {

struct GradCheckOptions {
  double step = 1e-5;
  std::size_t coordinates_per_tensor = 50;
  std::uint64_t seed = 17;
  /// Denominator floor; gradients smaller than this are compared in absolute terms.
  double magnitude_floor = 1e-5;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates_checked = 0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Compares `analytic` against central differences of `loss` on a random
/// subset of coordinates of every tensor (all of them when a tensor is
/// smaller than the subset size). The relative error of one coordinate is
/// |ga - gn| / max(1e-8, |ga| + |gn|). `params` is perturbed in place and
/// restored before returning.
GradCheckResult grad_check(const std::function<double(const ParameterStore&)>& loss,
                           ParameterStore& params, const ParameterStore& analytic,
                           GradCheckOptions options = {});

}  // namespace smartjourney
