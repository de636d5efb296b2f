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

#include "smartjourney/layers.hpp"

#include <cmath>

#include "smartjourney/activations.hpp"
#include "smartjourney/error.hpp"

namespace smartjourney {
namespace {

void require_cols(const Matrix& x, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(x.cols()) != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": expected " + std::to_string(expected) + " columns, got " +
                    std::to_string(x.cols()));
  }
}

}  // namespace

Dense Dense::create(ParameterStore& store, const std::string& prefix, std::size_t in,
                    std::size_t out) {
  Dense d;
  d.kernel = store.add(prefix + ".kernel", {in, out});
  d.bias = store.add(prefix + ".bias", {out});
  d.in = in;
  d.out = out;
  return d;
}

void Dense::initialize(ParameterStore& store, Rng& rng) const {
  glorot_uniform(store[kernel], in, out, rng);
  store[bias].fill(0.0);
}

Matrix Dense::forward(const ParameterStore& params, const Matrix& x) const {
  require_cols(x, in, "dense");
  Matrix y = x * params[kernel].matrix();
  y.rowwise() += params[bias].matrix().row(0);
  return y;
}

Matrix Dense::backward(const ParameterStore& params, const Matrix& x, const Matrix& dy,
                       ParameterStore& grads) const {
  grads[kernel].matrix().noalias() += x.transpose() * dy;
  grads[bias].matrix().row(0) += dy.colwise().sum();
  return dy * params[kernel].matrix().transpose();
}

Conv1d Conv1d::create(ParameterStore& store, const std::string& prefix, std::size_t in,
                      std::size_t out) {
  Conv1d c;
  c.kernel = store.add(prefix + ".kernel", {kWidth, in, out});
  c.bias = store.add(prefix + ".bias", {out});
  c.in = in;
  c.out = out;
  return c;
}

void Conv1d::initialize(ParameterStore& store, Rng& rng) const {
  glorot_uniform(store[kernel], kWidth * in, kWidth * out, rng);
  store[bias].fill(0.0);
}

Matrix Conv1d::unfold(const Matrix& x) {
  const Eigen::Index steps = x.rows();
  const Eigen::Index channels = x.cols();
  Matrix cols = Matrix::Zero(steps, kWidth * channels);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(kWidth); ++k) {
      const Eigen::Index src = t + k - 1;
      if (src >= 0 && src < steps) cols.block(t, k * channels, 1, channels) = x.row(src);
    }
  }
  return cols;
}

Matrix Conv1d::forward(const ParameterStore& params, const Matrix& x) const {
  require_cols(x, in, "conv1d");
  if (x.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "conv1d: empty input");
  Matrix y = unfold(x) * params[kernel].matrix();
  y.rowwise() += params[bias].matrix().row(0);
  return y;
}

Matrix Conv1d::backward(const ParameterStore& params, const Matrix& x, const Matrix& dy,
                        ParameterStore& grads) const {
  grads[kernel].matrix().noalias() += unfold(x).transpose() * dy;
  grads[bias].matrix().row(0) += dy.colwise().sum();
  const Matrix dcols = dy * params[kernel].matrix().transpose();
  const Eigen::Index steps = x.rows();
  const Eigen::Index channels = x.cols();
  Matrix dx = Matrix::Zero(steps, channels);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(kWidth); ++k) {
      const Eigen::Index src = t + k - 1;
      if (src >= 0 && src < steps) dx.row(src) += dcols.block(t, k * channels, 1, channels);
    }
  }
  return dx;
}

LayerNorm LayerNorm::create(ParameterStore& store, const std::string& prefix, std::size_t width) {
  LayerNorm ln;
  ln.gain = store.add(prefix + ".gain", {width});
  ln.bias = store.add(prefix + ".bias", {width});
  ln.width = width;
  return ln;
}

void LayerNorm::initialize(ParameterStore& store) const {
  store[gain].fill(1.0);
  store[bias].fill(0.0);
}

Matrix LayerNorm::normalize(const Matrix& x, Vector* inv_std) {
  const double n = static_cast<double>(x.cols());
  Matrix out(x.rows(), x.cols());
  if (inv_std) inv_std->resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.row(r).sum() / n;
    const double var = (x.row(r).array() - mean).square().sum() / n;
    const double s = 1.0 / std::sqrt(var + kEpsilon);
    out.row(r) = (x.row(r).array() - mean) * s;
    if (inv_std) (*inv_std)(r) = s;
  }
  return out;
}

Matrix LayerNorm::forward(const ParameterStore& params, const Matrix& x, Cache* cache) const {
  require_cols(x, width, "layer_norm");
  Vector inv_std;
  Matrix normalized = normalize(x, &inv_std);
  Matrix y = normalized.array().rowwise() * params[gain].matrix().row(0).array();
  y.rowwise() += params[bias].matrix().row(0);
  if (cache) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Matrix LayerNorm::backward(const ParameterStore& params, const Cache& cache, const Matrix& dy,
                           ParameterStore& grads) const {
  grads[gain].matrix().row(0) += dy.cwiseProduct(cache.normalized).colwise().sum();
  grads[bias].matrix().row(0) += dy.colwise().sum();
  const Matrix dxhat = dy.array().rowwise() * params[gain].matrix().row(0).array();
  const double n = static_cast<double>(dy.cols());
  Matrix dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const double mean_d = dxhat.row(r).sum() / n;
    const double mean_dx = dxhat.row(r).dot(cache.normalized.row(r)) / n;
    dx.row(r) = cache.inv_std(r) *
                (dxhat.row(r).array() - mean_d - cache.normalized.row(r).array() * mean_dx);
  }
  return dx;
}

MlpHead MlpHead::create(ParameterStore& store, const std::string& prefix, std::size_t in,
                        std::size_t units1, std::size_t units2) {
  return MlpHead{Dense::create(store, prefix + ".dense1", in, units1),
                 Dense::create(store, prefix + ".dense2", units1, units2),
                 Dense::create(store, prefix + ".dense3", units2, 1)};
}

void MlpHead::initialize(ParameterStore& store, Rng& rng) const {
  hidden1.initialize(store, rng);
  hidden2.initialize(store, rng);
  output.initialize(store, rng);
}

double MlpHead::forward(const ParameterStore& params, const Matrix& x, Cache* cache) const {
  Matrix pre1 = hidden1.forward(params, x);
  Matrix act1 = relu(pre1);
  Matrix pre2 = hidden2.forward(params, act1);
  Matrix act2 = relu(pre2);
  const double y = output.forward(params, act2)(0, 0);
  if (cache) {
    cache->input = x;
    cache->pre1 = std::move(pre1);
    cache->act1 = std::move(act1);
    cache->pre2 = std::move(pre2);
    cache->act2 = std::move(act2);
  }
  return y;
}

Matrix MlpHead::backward(const ParameterStore& params, const Cache& cache, double d_output,
                         ParameterStore& grads) const {
  const Matrix dy = Matrix::Constant(1, 1, d_output);
  const Matrix d_act2 = output.backward(params, cache.act2, dy, grads);
  const Matrix d_act1 = hidden2.backward(params, cache.act1, relu_backward(cache.pre2, d_act2), grads);
  return hidden1.backward(params, cache.input, relu_backward(cache.pre1, d_act1), grads);
}

}  // namespace smartjourney
