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

#include <span>

#include "smartjourney/tensor.hpp"

namespace smartjourney {

inline constexpr double kHuberDelta = 1.0;
inline constexpr double kKernelL2 = 1e-4;

/// Huber loss of a single residual e = predicted - actual.
double huber(double error, double delta = kHuberDelta);
/// d huber / d error.
double huber_derivative(double error, double delta = kHuberDelta);

/// Mean Huber loss. Throws Error(kInvalidArgument) on empty or unequal input.
double huber_loss(std::span<const double> predicted, std::span<const double> actual,
                  double delta = kHuberDelta);

/// lambda * sum(w^2).
double l2_penalty(const Tensor& weights, double lambda = kKernelL2);
/// Accumulates 2 * lambda * w into `grad`.
void l2_gradient(const Tensor& weights, double lambda, Tensor& grad);

}  // namespace smartjourney
