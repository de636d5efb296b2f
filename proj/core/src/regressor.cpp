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

#include "smartjourney/regressor.hpp"

#include "smartjourney/error.hpp"

namespace smartjourney {

std::string_view model_type_name(ModelType type) {
  switch (type) {
    case ModelType::kLstm: return "lstm";
    case ModelType::kTransformer: return "transformer";
    case ModelType::kGbdt: return "gbdt";
  }
  return "unknown";
}

std::optional<ModelType> parse_model_type(std::string_view name) {
  if (name == "lstm") return ModelType::kLstm;
  if (name == "transformer") return ModelType::kTransformer;
  if (name == "gbdt") return ModelType::kGbdt;
  return std::nullopt;
}

void NeuralNetwork::require_window(const Matrix& window) const {
  if (static_cast<std::size_t>(window.rows()) != window_ ||
      static_cast<std::size_t>(window.cols()) != features_) {
    throw Error(ErrorCode::kInvalidArgument,
                "window must be " + std::to_string(window_) + "x" + std::to_string(features_) +
                    ", got " + std::to_string(window.rows()) + "x" + std::to_string(window.cols()));
  }
}

double NeuralNetwork::sample_loss(const ParameterStore& params, const Matrix& window, double target,
                                  double delta) const {
  return huber(forward(params, window) - target, delta) + l2_penalty(params[l2_kernel_], l2_lambda_);
}

double NeuralNetwork::sample_gradient(const ParameterStore& params, const Matrix& window,
                                      double target, ParameterStore& grads, double delta) const {
  const double output = backward(
      params, window, [&](double y) { return huber_derivative(y - target, delta); }, grads);
  const double error = output - target;
  l2_gradient(params[l2_kernel_], l2_lambda_, grads[l2_kernel_]);
  return huber(error, delta) + l2_penalty(params[l2_kernel_], l2_lambda_);
}

double NeuralNetwork::batch_gradient(const ParameterStore& params,
                                     std::span<const Matrix* const> windows,
                                     std::span<const double> targets, ParameterStore& grads,
                                     double delta) const {
  if (windows.empty() || windows.size() != targets.size()) {
    throw Error(ErrorCode::kInvalidArgument, "batch_gradient needs equal, non-empty batches");
  }
  const double scale = 1.0 / static_cast<double>(windows.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const double target = targets[i];
    const double output = backward(
        params, *windows[i], [&](double y) { return scale * huber_derivative(y - target, delta); },
        grads);
    loss += huber(output - target, delta);
  }
  l2_gradient(params[l2_kernel_], l2_lambda_, grads[l2_kernel_]);
  return loss * scale + l2_penalty(params[l2_kernel_], l2_lambda_);
}

}  // namespace smartjourney
