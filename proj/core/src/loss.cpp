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

#include "smartjourney/loss.hpp"

#include <cmath>

#include "smartjourney/error.hpp"

namespace smartjourney {

double huber(double error, double delta) {
  const double a = std::abs(error);
  return a <= delta ? 0.5 * error * error : delta * (a - 0.5 * delta);
}

double huber_derivative(double error, double delta) {
  if (error > delta) return delta;
  if (error < -delta) return -delta;
  return error;
}

double huber_loss(std::span<const double> predicted, std::span<const double> actual, double delta) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw Error(ErrorCode::kInvalidArgument, "huber_loss needs equal, non-empty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += huber(predicted[i] - actual[i], delta);
  return sum / static_cast<double>(predicted.size());
}

double l2_penalty(const Tensor& weights, double lambda) {
  double sum = 0.0;
  for (double w : weights.values()) sum += w * w;
  return lambda * sum;
}

void l2_gradient(const Tensor& weights, double lambda, Tensor& grad) {
  auto g = grad.values();
  auto w = weights.values();
  for (std::size_t i = 0; i < w.size(); ++i) g[i] += 2.0 * lambda * w[i];
}

}  // namespace smartjourney
