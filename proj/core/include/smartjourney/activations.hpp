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

#include "smartjourney/tensor.hpp"

namespace smartjourney {

/// Logistic function, evaluated without overflow for large |z|.
double sigmoid(double z);
Matrix sigmoid(const Matrix& z);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }
Matrix relu(const Matrix& x);
/// dL/dx given the ReLU input x and upstream gradient dy.
Matrix relu_backward(const Matrix& x, const Matrix& dy);

Matrix tanh(const Matrix& x);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);
/// dL/dlogits for row-wise softmax output y and upstream gradient dy.
Matrix softmax_rows_backward(const Matrix& y, const Matrix& dy);

}  // namespace smartjourney
