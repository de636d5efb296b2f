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

#include "smartjourney/activations.hpp"

#include <cmath>

namespace smartjourney {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& x, const Matrix& dy) {
  return dy.cwiseProduct(x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
}

Matrix tanh(const Matrix& x) {
  return x.unaryExpr([](double v) { return std::tanh(v); });
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      out(r, c) = std::exp(logits(r, c) - m);
      sum += out(r, c);
    }
    out.row(r) /= sum;
  }
  return out;
}

Matrix softmax_rows_backward(const Matrix& y, const Matrix& dy) {
  const Vector dots = y.cwiseProduct(dy).rowwise().sum();
  return y.cwiseProduct(dy - dots.replicate(1, dy.cols()));
}

}  // namespace smartjourney
