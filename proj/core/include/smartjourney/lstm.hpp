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

#include "smartjourney/layers.hpp"
#include "smartjourney/regressor.hpp"

namespace smartjourney {

/// Read-only view of one LSTM layer's weights. Every gate matrix acts on the
/// concatenation [h_{t-1}, x_t] and has shape (hidden, hidden + input).
struct LstmCellWeights {
  ConstMatrixMap w_forget, w_input, w_candidate, w_output;
  ConstMatrixMap b_forget, b_input, b_candidate, b_output;  // 1 x hidden
  std::size_t input = 0;
  std::size_t hidden = 0;
};

struct LstmState {
  RowVector h;
  RowVector c;
};

/// One time step:
///   f = sigmoid(W_f [h, x] + b_f), i = sigmoid(W_i [h, x] + b_i),
///   c~ = tanh(W_c [h, x] + b_c),   o = sigmoid(W_o [h, x] + b_o),
///   C = f * C_prev + i * c~,       h = o * tanh(C).
LstmState lstm_cell_step(const RowVector& x, const LstmState& previous, const LstmCellWeights& weights);

/// An LSTM layer unrolled over a (time x input) sequence from a zero state;
/// emits the full (time x hidden) hidden-state sequence.
struct LstmLayer {
  ParamId w_forget, w_input, w_candidate, w_output;
  ParamId b_forget, b_input, b_candidate, b_output;
  std::size_t input = 0;
  std::size_t hidden = 0;

  struct Cache {
    Matrix x;
    Matrix h_prev, c_prev;
    Matrix forget, input_gate, candidate, output_gate;
    Matrix tanh_c;
  };

  static LstmLayer create(ParameterStore& store, const std::string& prefix, std::size_t input,
                          std::size_t hidden);
  /// Glorot-uniform gate matrices, forget bias 1, other biases 0.
  void initialize(ParameterStore& store, Rng& rng) const;
  LstmCellWeights weights(const ParameterStore& params) const;

  Matrix forward(const ParameterStore& params, const Matrix& x, Cache* cache = nullptr) const;
  /// Backpropagation through time. `dh` is dL/dh_t for every step.
  Matrix backward(const ParameterStore& params, const Cache& cache, const Matrix& dh,
                  ParameterStore& grads) const;
};

struct LstmArchitecture {
  std::size_t window = 24;
  std::size_t features = 6;
  std::size_t conv_filters = 32;
  std::size_t hidden1 = 128;
  std::size_t hidden2 = 64;
  std::size_t head1 = 128;
  std::size_t head2 = 64;
  double l2_lambda = kKernelL2;
};

/// conv(width 3) + ReLU -> LSTM(hidden1) -> LSTM(hidden2) -> last hidden
/// state -> dense(head1, ReLU, L2) -> dense(head2, ReLU) -> dense(1).
class LstmNetwork final : public NeuralNetwork {
 public:
  LstmNetwork(const LstmArchitecture& arch, std::uint64_t seed);

  ModelType type() const override { return ModelType::kLstm; }
  const LstmArchitecture& architecture() const { return arch_; }

  double forward(const ParameterStore& params, const Matrix& window) const override;
  double backward(const ParameterStore& params, const Matrix& window,
                  const std::function<double(double)>& output_grad,
                  ParameterStore& grads) const override;

  const LstmLayer& lstm1() const { return lstm1_; }
  const LstmLayer& lstm2() const { return lstm2_; }

  /// Closed-form scalar parameter count for an architecture.
  static std::size_t parameter_count(const LstmArchitecture& arch);

 private:
  LstmArchitecture arch_;
  Conv1d conv_;
  LstmLayer lstm1_;
  LstmLayer lstm2_;
  MlpHead head_;
};

}  // namespace smartjourney
