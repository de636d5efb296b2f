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

#include "smartjourney/transformer.hpp"

#include <cmath>

#include "smartjourney/activations.hpp"

namespace smartjourney {

EncoderBlock EncoderBlock::create(ParameterStore& store, const std::string& prefix,
                                  std::size_t d_model, std::size_t heads, std::size_t ffn_hidden) {
  EncoderBlock block;
  block.attention = MultiHeadAttention::create(store, prefix + ".mha", d_model, heads);
  block.norm1 = LayerNorm::create(store, prefix + ".norm1", d_model);
  block.ffn1 = Dense::create(store, prefix + ".ffn1", d_model, ffn_hidden);
  block.ffn2 = Dense::create(store, prefix + ".ffn2", ffn_hidden, d_model);
  block.norm2 = LayerNorm::create(store, prefix + ".norm2", d_model);
  return block;
}

void EncoderBlock::initialize(ParameterStore& store, Rng& rng) const {
  attention.initialize(store, rng);
  norm1.initialize(store);
  ffn1.initialize(store, rng);
  ffn2.initialize(store, rng);
  norm2.initialize(store);
}

Matrix EncoderBlock::forward(const ParameterStore& params, const Matrix& x, Cache* cache) const {
  Matrix attended = attention.forward(params, x, cache ? &cache->attention : nullptr);
  attended += x;
  Matrix x1 = norm1.forward(params, attended, cache ? &cache->norm1 : nullptr);
  Matrix ffn_pre = ffn1.forward(params, x1);
  Matrix ffn_act = relu(ffn_pre);
  Matrix y = ffn2.forward(params, ffn_act);
  y += x1;
  Matrix out = norm2.forward(params, y, cache ? &cache->norm2 : nullptr);
  if (cache) {
    cache->x1 = std::move(x1);
    cache->ffn_pre = std::move(ffn_pre);
    cache->ffn_act = std::move(ffn_act);
  }
  return out;
}

Matrix EncoderBlock::backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                              ParameterStore& grads) const {
  const Matrix d_sum2 = norm2.backward(params, cache.norm2, dy, grads);
  const Matrix d_act = ffn2.backward(params, cache.ffn_act, d_sum2, grads);
  Matrix d_x1 = ffn1.backward(params, cache.x1, relu_backward(cache.ffn_pre, d_act), grads);
  d_x1 += d_sum2;
  const Matrix d_sum1 = norm1.backward(params, cache.norm1, d_x1, grads);
  Matrix dx = attention.backward(params, cache.attention, d_sum1, grads);
  dx += d_sum1;
  return dx;
}

Matrix sinusoidal_positions(std::size_t steps, std::size_t d_model) {
  Matrix pe(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(d_model));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t j = 0; j < d_model; ++j) {
      const double exponent = static_cast<double>(j - j % 2) / static_cast<double>(d_model);
      const double angle = static_cast<double>(t) / std::pow(10000.0, exponent);
      pe(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          j % 2 == 0 ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

TransformerNetwork::TransformerNetwork(const TransformerArchitecture& arch, std::uint64_t seed)
    : NeuralNetwork(arch.window, arch.features, arch.l2_lambda), arch_(arch) {
  conv_ = Conv1d::create(params_, "conv", arch.features, arch.d_model);
  encoder_ = EncoderBlock::create(params_, "encoder", arch.d_model, arch.heads, arch.ffn_hidden);
  head_ = MlpHead::create(params_, "head", arch.d_model, arch.head1, arch.head2);
  l2_kernel_ = head_.hidden1.kernel;
  positions_ = arch.positional_encoding ? sinusoidal_positions(arch.window, arch.d_model)
                                        : Matrix::Zero(static_cast<Eigen::Index>(arch.window),
                                                       static_cast<Eigen::Index>(arch.d_model));

  Rng rng(seed);
  conv_.initialize(params_, rng);
  encoder_.initialize(params_, rng);
  head_.initialize(params_, rng);
}

Matrix TransformerNetwork::encode(const ParameterStore& params, const Matrix& window) const {
  require_window(window);
  Matrix tokens = relu(conv_.forward(params, window));
  tokens += positions_;
  return encoder_.forward(params, tokens);
}

double TransformerNetwork::forward(const ParameterStore& params, const Matrix& window) const {
  const Matrix encoded = encode(params, window);
  const Matrix pooled = encoded.colwise().mean();
  return head_.forward(params, pooled);
}

double TransformerNetwork::backward(const ParameterStore& params, const Matrix& window,
                                    const std::function<double(double)>& output_grad,
                                    ParameterStore& grads) const {
  require_window(window);
  const Matrix conv_pre = conv_.forward(params, window);
  Matrix tokens = relu(conv_pre);
  tokens += positions_;
  EncoderBlock::Cache ec;
  const Matrix encoded = encoder_.forward(params, tokens, &ec);
  const Matrix pooled = encoded.colwise().mean();
  MlpHead::Cache hc;
  const double y = head_.forward(params, pooled, &hc);

  const Matrix d_pooled = head_.backward(params, hc, output_grad(y), grads);
  const Matrix d_encoded =
      d_pooled.replicate(encoded.rows(), 1) / static_cast<double>(encoded.rows());
  const Matrix d_tokens = encoder_.backward(params, ec, d_encoded, grads);
  conv_.backward(params, window, relu_backward(conv_pre, d_tokens), grads);
  return y;
}

}  // namespace smartjourney
