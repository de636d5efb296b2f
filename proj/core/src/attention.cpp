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

#include "smartjourney/attention.hpp"

#include <cmath>

#include "smartjourney/activations.hpp"
#include "smartjourney/error.hpp"

namespace smartjourney {

Matrix scaled_dot_product_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                    Matrix* weights) {
  if (q.cols() != k.cols()) throw Error(ErrorCode::kInvalidArgument, "attention: d_k mismatch");
  if (k.rows() != v.rows()) throw Error(ErrorCode::kInvalidArgument, "attention: key/value count mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Matrix a = softmax_rows((q * k.transpose()) * scale);
  Matrix out = a * v;
  if (weights) *weights = std::move(a);
  return out;
}

MultiHeadAttention MultiHeadAttention::create(ParameterStore& store, const std::string& prefix,
                                              std::size_t d_model, std::size_t heads) {
  if (heads == 0 || d_model % heads != 0) {
    throw Error(ErrorCode::kInvalidArgument, "d_model must be divisible by the head count");
  }
  MultiHeadAttention mha;
  mha.query = Dense::create(store, prefix + ".query", d_model, d_model);
  mha.key = Dense::create(store, prefix + ".key", d_model, d_model);
  mha.value = Dense::create(store, prefix + ".value", d_model, d_model);
  mha.output = Dense::create(store, prefix + ".output", d_model, d_model);
  mha.d_model = d_model;
  mha.heads = heads;
  return mha;
}

void MultiHeadAttention::initialize(ParameterStore& store, Rng& rng) const {
  query.initialize(store, rng);
  key.initialize(store, rng);
  value.initialize(store, rng);
  output.initialize(store, rng);
}

Matrix MultiHeadAttention::forward(const ParameterStore& params, const Matrix& x, Cache* cache) const {
  if (static_cast<std::size_t>(x.cols()) != d_model) {
    throw Error(ErrorCode::kInvalidArgument, "multi_head_attention: input width mismatch");
  }
  Matrix q = query.forward(params, x);
  Matrix k = key.forward(params, x);
  Matrix v = value.forward(params, x);
  const Eigen::Index dk = static_cast<Eigen::Index>(head_width());
  Matrix concat(x.rows(), x.cols());
  std::vector<Matrix> weights(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(h) * dk;
    concat.middleCols(c0, dk) = scaled_dot_product_attention(
        q.middleCols(c0, dk), k.middleCols(c0, dk), v.middleCols(c0, dk), &weights[h]);
  }
  Matrix y = output.forward(params, concat);
  if (cache) {
    cache->x = x;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->concat = std::move(concat);
    cache->weights = std::move(weights);
  }
  return y;
}

Matrix MultiHeadAttention::backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                                    ParameterStore& grads) const {
  const Matrix d_concat = output.backward(params, cache.concat, dy, grads);
  const Eigen::Index dk = static_cast<Eigen::Index>(head_width());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  Matrix dq(cache.q.rows(), cache.q.cols());
  Matrix dk_all(cache.k.rows(), cache.k.cols());
  Matrix dv(cache.v.rows(), cache.v.cols());
  for (std::size_t h = 0; h < heads; ++h) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(h) * dk;
    const Matrix& a = cache.weights[h];
    const Matrix d_out = d_concat.middleCols(c0, dk);
    const Matrix da = d_out * cache.v.middleCols(c0, dk).transpose();
    dv.middleCols(c0, dk) = a.transpose() * d_out;
    const Matrix ds = softmax_rows_backward(a, da) * scale;
    dq.middleCols(c0, dk) = ds * cache.k.middleCols(c0, dk);
    dk_all.middleCols(c0, dk) = ds.transpose() * cache.q.middleCols(c0, dk);
  }
  Matrix dx = query.backward(params, cache.x, dq, grads);
  dx += key.backward(params, cache.x, dk_all, grads);
  dx += value.backward(params, cache.x, dv, grads);
  return dx;
}

}  // namespace smartjourney
