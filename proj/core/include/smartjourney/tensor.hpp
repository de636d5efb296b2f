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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smartjourney {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using Vector = Eigen::VectorXd;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;

/// Row-major dense array of doubles with an explicit shape.
///
/// The 2-D view used by the layers folds every leading dimension into rows
/// and keeps the last one as columns; a 1-D tensor of length n is a 1 x n row.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::size_t rows() const;
  std::size_t cols() const;
  MatrixMap matrix() { return {data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols())}; }
  ConstMatrixMap matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols())};
  }

  void fill(double value);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

struct ParamId {
  std::size_t index = 0;
};

using Rng = std::mt19937_64;

/// Ordered, named collection of tensors. A network owns one store for its
/// weights; gradients and optimizer velocities live in stores of the same
/// layout created with zeros_like().
class ParameterStore {
 public:
  ParamId add(std::string name, std::vector<std::size_t> shape);

  std::size_t size() const { return tensors_.size(); }
  Tensor& operator[](ParamId id) { return tensors_[id.index]; }
  const Tensor& operator[](ParamId id) const { return tensors_[id.index]; }
  Tensor& at(std::size_t i) { return tensors_[i]; }
  const Tensor& at(std::size_t i) const { return tensors_[i]; }
  const std::string& name(std::size_t i) const { return names_[i]; }

  /// Index of the tensor called `name`; throws when absent.
  ParamId find(const std::string& name) const;

  ParameterStore zeros_like() const;
  void set_zero();
  /// this += scale * other (layouts must match).
  void add_scaled(const ParameterStore& other, double scale);
  bool same_layout(const ParameterStore& other) const;
  std::size_t scalar_count() const;

  friend bool operator==(const ParameterStore&, const ParameterStore&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
};

/// Glorot-uniform fill in +-sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace smartjourney
