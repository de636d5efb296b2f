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

#include "smartjourney/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smartjourney {

GradCheckResult grad_check(const std::function<double(const ParameterStore&)>& loss,
                           ParameterStore& params, const ParameterStore& analytic,
                           GradCheckOptions options) {
  GradCheckResult result;
  Rng rng(options.seed);
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& tensor = params.at(t);
    std::vector<std::size_t> coords(tensor.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > options.coordinates_per_tensor) {
      // Partial Fisher-Yates: the first k entries become a uniform sample.
      for (std::size_t i = 0; i < options.coordinates_per_tensor; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, coords.size() - 1);
        std::swap(coords[i], coords[pick(rng)]);
      }
      coords.resize(options.coordinates_per_tensor);
    }
    for (std::size_t c : coords) {
      const double original = tensor[c];
      tensor[c] = original + options.step;
      const double up = loss(params);
      tensor[c] = original - options.step;
      const double down = loss(params);
      tensor[c] = original;
      const double numeric = (up - down) / (2.0 * options.step);
      const double exact = analytic.at(t)[c];
      const double rel =
          std::abs(exact - numeric) / std::max(options.magnitude_floor, std::abs(exact) + std::abs(numeric));
      ++result.coordinates_checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = params.name(t) + "[" + std::to_string(c) + "]";
        result.worst_analytic = exact;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace smartjourney
