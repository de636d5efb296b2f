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

#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "smartjourney/loss.hpp"
#include "smartjourney/tensor.hpp"
#include "smartjourney/time.hpp"

namespace smartjourney {

enum class ModelType { kLstm, kTransformer, kGbdt };

std::string_view model_type_name(ModelType type);
std::optional<ModelType> parse_model_type(std::string_view name);

/// A trained one-step-ahead regressor. `window` is the normalized
/// (W x F) feature history and `target_time` the hour being predicted.
/// Implementations are immutable after training and safe to share across
/// threads for inference.
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual ModelType type() const = 0;
  virtual double predict(const Matrix& window, Hour target_time) const = 0;
};

/// Shared plumbing for the two networks: owns the weights, and turns the
/// per-architecture backward pass into Huber + L2 loss gradients.
class NeuralNetwork : public Regressor {
 public:
  std::size_t window_length() const { return window_; }
  std::size_t feature_count() const { return features_; }

  ParameterStore& parameters() { return params_; }
  const ParameterStore& parameters() const { return params_; }

  /// Kernel carrying the L2 penalty and its factor.
  ParamId regularized_kernel() const { return l2_kernel_; }
  double l2_lambda() const { return l2_lambda_; }

  double predict(const Matrix& window, Hour) const override { return forward(params_, window); }

  /// Network output for an arbitrary weight set of this network's layout.
  virtual double forward(const ParameterStore& params, const Matrix& window) const = 0;

  /// Runs forward and backward for one window. `output_grad` maps the
  /// network output to dL/d(output); d(output)/d(params) scaled by it is
  /// added into `grads`. Returns the network output.
  virtual double backward(const ParameterStore& params, const Matrix& window,
                          const std::function<double(double)>& output_grad,
                          ParameterStore& grads) const = 0;

  /// huber(output - target) + lambda * |kernel|^2.
  double sample_loss(const ParameterStore& params, const Matrix& window, double target,
                     double delta = kHuberDelta) const;

  /// Accumulates the gradient of sample_loss into `grads`; returns the loss.
  double sample_gradient(const ParameterStore& params, const Matrix& window, double target,
                         ParameterStore& grads, double delta = kHuberDelta) const;

  /// Mean Huber loss over a batch plus the L2 term; gradient accumulated
  /// into `grads` in batch order. Returns the loss.
  double batch_gradient(const ParameterStore& params, std::span<const Matrix* const> windows,
                        std::span<const double> targets, ParameterStore& grads,
                        double delta = kHuberDelta) const;

 protected:
  NeuralNetwork(std::size_t window, std::size_t features, double l2_lambda)
      : window_(window), features_(features), l2_lambda_(l2_lambda) {}

  void require_window(const Matrix& window) const;

  ParameterStore params_;
  ParamId l2_kernel_;

 private:
  std::size_t window_;
  std::size_t features_;
  double l2_lambda_;
};

}  // namespace smartjourney
