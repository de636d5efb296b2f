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

#include "smartjourney/attention.hpp"
#include "smartjourney/layers.hpp"
#include "smartjourney/regressor.hpp"

namespace smartjourney {

/// Post-norm encoder block:
///   X1 = LayerNorm(X + MHA(X)),  Y = LayerNorm(X1 + FFN(X1)),
/// with FFN = dense(ffn_hidden, ReLU) -> dense(d_model).
struct EncoderBlock {
  MultiHeadAttention attention;
  LayerNorm norm1;
  Dense ffn1;
  Dense ffn2;
  LayerNorm norm2;

  struct Cache {
    MultiHeadAttention::Cache attention;
    LayerNorm::Cache norm1;
    Matrix x1;
    Matrix ffn_pre;
    Matrix ffn_act;
    LayerNorm::Cache norm2;
  };

  static EncoderBlock create(ParameterStore& store, const std::string& prefix, std::size_t d_model,
                             std::size_t heads, std::size_t ffn_hidden);
  void initialize(ParameterStore& store, Rng& rng) const;

  Matrix forward(const ParameterStore& params, const Matrix& x, Cache* cache = nullptr) const;
  Matrix backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                  ParameterStore& grads) const;
};

/// Sinusoidal position table: PE[t, 2i] = sin(t / 10000^(2i/d)),
/// PE[t, 2i+1] = cos(t / 10000^(2i/d)).
Matrix sinusoidal_positions(std::size_t steps, std::size_t d_model);

struct TransformerArchitecture {
  std::size_t window = 24;
  std::size_t features = 6;
  std::size_t d_model = 256;
  std::size_t heads = 4;
  std::size_t ffn_hidden = 256;
  std::size_t head1 = 128;
  std::size_t head2 = 64;
  double l2_lambda = kKernelL2;
  bool positional_encoding = true;
};

/// conv(width 3, d_model filters) + ReLU -> + positions -> encoder block ->
/// mean over time -> dense(head1, ReLU, L2) -> dense(head2, ReLU) -> dense(1).
class TransformerNetwork final : public NeuralNetwork {
 public:
  TransformerNetwork(const TransformerArchitecture& arch, std::uint64_t seed);

  ModelType type() const override { return ModelType::kTransformer; }
  const TransformerArchitecture& architecture() const { return arch_; }
  const EncoderBlock& encoder() const { return encoder_; }

  double forward(const ParameterStore& params, const Matrix& window) const override;
  double backward(const ParameterStore& params, const Matrix& window,
                  const std::function<double(double)>& output_grad,
                  ParameterStore& grads) const override;

  /// Encoder output before pooling, for inspection and tests.
  Matrix encode(const ParameterStore& params, const Matrix& window) const;

 private:
  TransformerArchitecture arch_;
  Conv1d conv_;
  EncoderBlock encoder_;
  MlpHead head_;
  Matrix positions_;
};

}  // namespace smartjourney
