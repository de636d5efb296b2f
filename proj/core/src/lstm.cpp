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

#include "smartjourney/lstm.hpp"

#include <cmath>

#include "smartjourney/activations.hpp"
#include "smartjourney/error.hpp"

namespace smartjourney {
namespace {

Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

double sigmoid_scalar(double z) { return sigmoid(z); }

}  // namespace

LstmState lstm_cell_step(const RowVector& x, const LstmState& previous, const LstmCellWeights& w) {
  if (static_cast<std::size_t>(x.size()) != w.input ||
      static_cast<std::size_t>(previous.h.size()) != w.hidden ||
      static_cast<std::size_t>(previous.c.size()) != w.hidden) {
    throw Error(ErrorCode::kInvalidArgument, "lstm_cell_step: shape mismatch");
  }
  RowVector z(w.hidden + w.input);
  z << previous.h, x;
  const RowVector zf = z * w.w_forget.transpose() + w.b_forget;
  const RowVector zi = z * w.w_input.transpose() + w.b_input;
  const RowVector zc = z * w.w_candidate.transpose() + w.b_candidate;
  const RowVector zo = z * w.w_output.transpose() + w.b_output;
  const RowVector f = zf.unaryExpr(&sigmoid_scalar);
  const RowVector i = zi.unaryExpr(&sigmoid_scalar);
  const RowVector candidate = zc.array().tanh();
  const RowVector o = zo.unaryExpr(&sigmoid_scalar);
  LstmState next;
  next.c = f.cwiseProduct(previous.c) + i.cwiseProduct(candidate);
  next.h = o.cwiseProduct(next.c.array().tanh().matrix());
  return next;
}

LstmLayer LstmLayer::create(ParameterStore& store, const std::string& prefix, std::size_t input,
                            std::size_t hidden) {
  LstmLayer layer;
  const std::vector<std::size_t> wshape{hidden, hidden + input};
  layer.w_forget = store.add(prefix + ".W_f", wshape);
  layer.w_input = store.add(prefix + ".W_i", wshape);
  layer.w_candidate = store.add(prefix + ".W_c", wshape);
  layer.w_output = store.add(prefix + ".W_o", wshape);
  layer.b_forget = store.add(prefix + ".b_f", {hidden});
  layer.b_input = store.add(prefix + ".b_i", {hidden});
  layer.b_candidate = store.add(prefix + ".b_c", {hidden});
  layer.b_output = store.add(prefix + ".b_o", {hidden});
  layer.input = input;
  layer.hidden = hidden;
  return layer;
}

void LstmLayer::initialize(ParameterStore& store, Rng& rng) const {
  for (ParamId w : {w_forget, w_input, w_candidate, w_output}) {
    glorot_uniform(store[w], hidden + input, hidden, rng);
  }
  store[b_forget].fill(1.0);
  store[b_input].fill(0.0);
  store[b_candidate].fill(0.0);
  store[b_output].fill(0.0);
}

LstmCellWeights LstmLayer::weights(const ParameterStore& p) const {
  return LstmCellWeights{p[w_forget].matrix(), p[w_input].matrix(), p[w_candidate].matrix(),
                         p[w_output].matrix(), p[b_forget].matrix(), p[b_input].matrix(),
                         p[b_candidate].matrix(), p[b_output].matrix(), input, hidden};
}

Matrix LstmLayer::forward(const ParameterStore& params, const Matrix& x, Cache* cache) const {
  if (static_cast<std::size_t>(x.cols()) != input) {
    throw Error(ErrorCode::kInvalidArgument, "lstm layer: input width mismatch");
  }
  const Eigen::Index steps = x.rows();
  const Eigen::Index h = as_index(hidden);
  const Eigen::Index in = as_index(input);
  const LstmCellWeights w = weights(params);

  // Input contributions for every step at once; only the recurrent part is
  // sequential.
  const Matrix xf = (x * w.w_forget.rightCols(in).transpose()).rowwise() + w.b_forget.row(0);
  const Matrix xi = (x * w.w_input.rightCols(in).transpose()).rowwise() + w.b_input.row(0);
  const Matrix xc = (x * w.w_candidate.rightCols(in).transpose()).rowwise() + w.b_candidate.row(0);
  const Matrix xo = (x * w.w_output.rightCols(in).transpose()).rowwise() + w.b_output.row(0);

  Matrix hs(steps, h);
  Matrix cs(steps, h);
  Matrix f(steps, h), i(steps, h), g(steps, h), o(steps, h), tc(steps, h);
  RowVector h_prev = RowVector::Zero(h);
  RowVector c_prev = RowVector::Zero(h);
  Matrix h_prevs(steps, h), c_prevs(steps, h);
  for (Eigen::Index t = 0; t < steps; ++t) {
    h_prevs.row(t) = h_prev;
    c_prevs.row(t) = c_prev;
    f.row(t) = (xf.row(t) + h_prev * w.w_forget.leftCols(h).transpose()).unaryExpr(&sigmoid_scalar);
    i.row(t) = (xi.row(t) + h_prev * w.w_input.leftCols(h).transpose()).unaryExpr(&sigmoid_scalar);
    g.row(t) = (xc.row(t) + h_prev * w.w_candidate.leftCols(h).transpose()).array().tanh();
    o.row(t) = (xo.row(t) + h_prev * w.w_output.leftCols(h).transpose()).unaryExpr(&sigmoid_scalar);
    c_prev = f.row(t).cwiseProduct(c_prev) + i.row(t).cwiseProduct(g.row(t));
    tc.row(t) = c_prev.array().tanh();
    h_prev = o.row(t).cwiseProduct(tc.row(t));
    hs.row(t) = h_prev;
    cs.row(t) = c_prev;
  }
  if (cache) {
    cache->x = x;
    cache->h_prev = std::move(h_prevs);
    cache->c_prev = std::move(c_prevs);
    cache->forget = std::move(f);
    cache->input_gate = std::move(i);
    cache->candidate = std::move(g);
    cache->output_gate = std::move(o);
    cache->tanh_c = std::move(tc);
  }
  return hs;
}

Matrix LstmLayer::backward(const ParameterStore& params, const Cache& cache, const Matrix& dh,
                           ParameterStore& grads) const {
  const Eigen::Index steps = dh.rows();
  const Eigen::Index h = as_index(hidden);
  const Eigen::Index in = as_index(input);
  const LstmCellWeights w = weights(params);

  Matrix dzf(steps, h), dzi(steps, h), dzc(steps, h), dzo(steps, h);
  RowVector dh_next = RowVector::Zero(h);
  RowVector dc_next = RowVector::Zero(h);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const RowVector dht = dh.row(t) + dh_next;
    const auto f = cache.forget.row(t).array();
    const auto i = cache.input_gate.row(t).array();
    const auto g = cache.candidate.row(t).array();
    const auto o = cache.output_gate.row(t).array();
    const auto tc = cache.tanh_c.row(t).array();
    const RowVector d_o = dht.array() * tc;
    const RowVector dc = (dht.array() * o * (1.0 - tc.square())).matrix() + dc_next;
    dzf.row(t) = dc.array() * cache.c_prev.row(t).array() * f * (1.0 - f);
    dzi.row(t) = dc.array() * g * i * (1.0 - i);
    dzc.row(t) = dc.array() * i * (1.0 - g.square());
    dzo.row(t) = d_o.array() * o * (1.0 - o);
    dc_next = dc.array() * f;
    dh_next = dzf.row(t) * w.w_forget.leftCols(h) + dzi.row(t) * w.w_input.leftCols(h) +
              dzc.row(t) * w.w_candidate.leftCols(h) + dzo.row(t) * w.w_output.leftCols(h);
  }

  auto accumulate = [&](ParamId wid, ParamId bid, const Matrix& dz) {
    MatrixMap gw = grads[wid].matrix();
    gw.leftCols(h).noalias() += dz.transpose() * cache.h_prev;
    gw.rightCols(in).noalias() += dz.transpose() * cache.x;
    grads[bid].matrix().row(0) += dz.colwise().sum();
  };
  accumulate(w_forget, b_forget, dzf);
  accumulate(w_input, b_input, dzi);
  accumulate(w_candidate, b_candidate, dzc);
  accumulate(w_output, b_output, dzo);

  Matrix dx = dzf * w.w_forget.rightCols(in);
  dx.noalias() += dzi * w.w_input.rightCols(in);
  dx.noalias() += dzc * w.w_candidate.rightCols(in);
  dx.noalias() += dzo * w.w_output.rightCols(in);
  return dx;
}

LstmNetwork::LstmNetwork(const LstmArchitecture& arch, std::uint64_t seed)
    : NeuralNetwork(arch.window, arch.features, arch.l2_lambda), arch_(arch) {
  conv_ = Conv1d::create(params_, "conv", arch.features, arch.conv_filters);
  lstm1_ = LstmLayer::create(params_, "lstm1", arch.conv_filters, arch.hidden1);
  lstm2_ = LstmLayer::create(params_, "lstm2", arch.hidden1, arch.hidden2);
  head_ = MlpHead::create(params_, "head", arch.hidden2, arch.head1, arch.head2);
  l2_kernel_ = head_.hidden1.kernel;

  Rng rng(seed);
  conv_.initialize(params_, rng);
  lstm1_.initialize(params_, rng);
  lstm2_.initialize(params_, rng);
  head_.initialize(params_, rng);
}

double LstmNetwork::forward(const ParameterStore& params, const Matrix& window) const {
  require_window(window);
  const Matrix features = relu(conv_.forward(params, window));
  const Matrix h1 = lstm1_.forward(params, features);
  const Matrix h2 = lstm2_.forward(params, h1);
  return head_.forward(params, h2.bottomRows(1));
}

double LstmNetwork::backward(const ParameterStore& params, const Matrix& window,
                             const std::function<double(double)>& output_grad,
                             ParameterStore& grads) const {
  require_window(window);
  const Matrix conv_pre = conv_.forward(params, window);
  const Matrix features = relu(conv_pre);
  LstmLayer::Cache c1, c2;
  const Matrix h1 = lstm1_.forward(params, features, &c1);
  const Matrix h2 = lstm2_.forward(params, h1, &c2);
  MlpHead::Cache hc;
  const double y = head_.forward(params, h2.bottomRows(1), &hc);

  const Matrix d_last = head_.backward(params, hc, output_grad(y), grads);
  Matrix dh2 = Matrix::Zero(h2.rows(), h2.cols());
  dh2.bottomRows(1) = d_last;
  const Matrix dh1 = lstm2_.backward(params, c2, dh2, grads);
  const Matrix d_features = lstm1_.backward(params, c1, dh1, grads);
  conv_.backward(params, window, relu_backward(conv_pre, d_features), grads);
  return y;
}

std::size_t LstmNetwork::parameter_count(const LstmArchitecture& a) {
  const std::size_t conv = Conv1d::kWidth * a.features * a.conv_filters + a.conv_filters;
  const std::size_t lstm1 = 4 * (a.hidden1 * (a.hidden1 + a.conv_filters) + a.hidden1);
  const std::size_t lstm2 = 4 * (a.hidden2 * (a.hidden2 + a.hidden1) + a.hidden2);
  const std::size_t head = (a.hidden2 * a.head1 + a.head1) + (a.head1 * a.head2 + a.head2) + (a.head2 + 1);
  return conv + lstm1 + lstm2 + head;
}

}  // namespace smartjourney
