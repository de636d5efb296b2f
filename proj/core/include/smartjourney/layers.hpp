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

#include <string>

#include "smartjourney/tensor.hpp"

namespace smartjourney {

/// Affine map y = x W + b applied to every row of x. The kernel has shape
/// (in, out).
struct Dense {
  ParamId kernel;
  ParamId bias;
  std::size_t in = 0;
  std::size_t out = 0;

  static Dense create(ParameterStore& store, const std::string& prefix, std::size_t in,
                      std::size_t out);
  void initialize(ParameterStore& store, Rng& rng) const;

  Matrix forward(const ParameterStore& params, const Matrix& x) const;
  /// Accumulates kernel/bias gradients into `grads` and returns dL/dx.
  Matrix backward(const ParameterStore& params, const Matrix& x, const Matrix& dy,
                  ParameterStore& grads) const;
};

/// Temporal convolution over a (time x channels) input with a width-3
/// kernel spanning every input channel, zero padded so the output keeps the
/// input length. Kernel shape is (3, in, out); tap k reads time t + k - 1.
struct Conv1d {
  static constexpr std::size_t kWidth = 3;

  ParamId kernel;
  ParamId bias;
  std::size_t in = 0;
  std::size_t out = 0;

  static Conv1d create(ParameterStore& store, const std::string& prefix, std::size_t in,
                       std::size_t out);
  void initialize(ParameterStore& store, Rng& rng) const;

  Matrix forward(const ParameterStore& params, const Matrix& x) const;
  Matrix backward(const ParameterStore& params, const Matrix& x, const Matrix& dy,
                  ParameterStore& grads) const;

  /// (T x 3*in) matrix whose row t holds [x[t-1], x[t], x[t+1]].
  static Matrix unfold(const Matrix& x);
};

/// Per-row normalisation to zero mean and unit variance followed by a
/// learned gain and bias.
struct LayerNorm {
  static constexpr double kEpsilon = 1e-5;

  ParamId gain;
  ParamId bias;
  std::size_t width = 0;

  struct Cache {
    Matrix normalized;
    Vector inv_std;
  };

  static LayerNorm create(ParameterStore& store, const std::string& prefix, std::size_t width);
  void initialize(ParameterStore& store) const;

  Matrix forward(const ParameterStore& params, const Matrix& x, Cache* cache = nullptr) const;
  Matrix backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                  ParameterStore& grads) const;

  /// Normalisation alone, without the affine part.
  static Matrix normalize(const Matrix& x, Vector* inv_std = nullptr);
};

/// Regression head dense(h1, ReLU) -> dense(h2, ReLU) -> dense(1, linear)
/// over a single feature row.
struct MlpHead {
  Dense hidden1;
  Dense hidden2;
  Dense output;

  struct Cache {
    Matrix input;
    Matrix pre1;
    Matrix act1;
    Matrix pre2;
    Matrix act2;
  };

  static MlpHead create(ParameterStore& store, const std::string& prefix, std::size_t in,
                        std::size_t units1, std::size_t units2);
  void initialize(ParameterStore& store, Rng& rng) const;

  double forward(const ParameterStore& params, const Matrix& x, Cache* cache = nullptr) const;
  /// Returns dL/dx for the head input given dL/d(output).
  Matrix backward(const ParameterStore& params, const Cache& cache, double d_output,
                  ParameterStore& grads) const;
};

}  // namespace smartjourney
