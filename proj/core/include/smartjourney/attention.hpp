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

#include <vector>

#include "smartjourney/layers.hpp"

namespace smartjourney {

/// softmax(Q K^T / sqrt(d_k)) V with a row-wise softmax. Q is n x d_k, K is
/// m x d_k and V is m x d_v. When `weights` is given it receives the n x m
/// attention matrix.
Matrix scaled_dot_product_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                    Matrix* weights = nullptr);

/// Self-attention with `heads` parallel heads of width d_model / heads.
/// Head h projects with the column block [h*d_k, (h+1)*d_k) of the query,
/// key and value kernels; the concatenated head outputs pass through the
/// output projection.
struct MultiHeadAttention {
  Dense query;
  Dense key;
  Dense value;
  Dense output;
  std::size_t d_model = 0;
  std::size_t heads = 0;

  struct Cache {
    Matrix x;
    Matrix q, k, v;
    Matrix concat;
    std::vector<Matrix> weights;
  };

  static MultiHeadAttention create(ParameterStore& store, const std::string& prefix,
                                   std::size_t d_model, std::size_t heads);
  void initialize(ParameterStore& store, Rng& rng) const;
  std::size_t head_width() const { return d_model / heads; }

  Matrix forward(const ParameterStore& params, const Matrix& x, Cache* cache = nullptr) const;
  Matrix backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                  ParameterStore& grads) const;
};

}  // namespace smartjourney
