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

#include "smartjourney/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "smartjourney/error.hpp"

namespace smartjourney {

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)),
      data_(std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>()), fill) {}

std::size_t Tensor::rows() const {
  if (shape_.size() <= 1) return 1;
  return std::accumulate(shape_.begin(), shape_.end() - 1, std::size_t{1}, std::multiplies<>());
}

std::size_t Tensor::cols() const { return shape_.empty() ? 1 : shape_.back(); }

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

ParamId ParameterStore::add(std::string name, std::vector<std::size_t> shape) {
  names_.push_back(std::move(name));
  tensors_.emplace_back(std::move(shape));
  return ParamId{tensors_.size() - 1};
}

ParamId ParameterStore::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::kInvalidArgument, "no parameter named " + name);
  return ParamId{static_cast<std::size_t>(it - names_.begin())};
}

ParameterStore ParameterStore::zeros_like() const {
  ParameterStore out;
  for (std::size_t i = 0; i < tensors_.size(); ++i) out.add(names_[i], tensors_[i].shape());
  return out;
}

void ParameterStore::set_zero() {
  for (auto& t : tensors_) t.fill(0.0);
}

void ParameterStore::add_scaled(const ParameterStore& other, double scale) {
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    auto dst = tensors_[i].values();
    auto src = other.tensors_[i].values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += scale * src[k];
  }
}

bool ParameterStore::same_layout(const ParameterStore& other) const {
  if (tensors_.size() != other.tensors_.size()) return false;
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    if (names_[i] != other.names_[i] || tensors_[i].shape() != other.tensors_[i].shape()) return false;
  }
  return true;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.values()) v = dist(rng);
}

}  // namespace smartjourney
