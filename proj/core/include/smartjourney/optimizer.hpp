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

#include <optional>
#include <span>

#include "smartjourney/tensor.hpp"

namespace smartjourney {

struct SgdConfig {
  double learning_rate = 2.5e-5;
  double momentum = 0.90;
};

/// Classical momentum: v <- mu * v - lr * g; p <- p + v.
class SgdMomentum {
 public:
  SgdMomentum(const ParameterStore& params, SgdConfig config);

  void step(ParameterStore& params, const ParameterStore& grads);

  double learning_rate() const { return config_.learning_rate; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  double momentum() const { return config_.momentum; }
  const ParameterStore& velocity() const { return velocity_; }

 private:
  SgdConfig config_;
  ParameterStore velocity_;
};

struct TrainingSchedule {
  double lr_decay_factor = 0.1;
  int lr_decay_every = 150;
  int early_stop_patience = 5;
  int max_epochs = 300;
};

struct ScheduleDecision {
  /// Learning rate to use from this epoch on, when it changes.
  std::optional<double> new_learning_rate;
  bool stop = false;
  /// Epoch (0-based) with the lowest validation loss so far, if any.
  std::optional<int> best_epoch;
};

/// Evaluated before running `epoch` (0-based), given the validation losses
/// of epochs [0, epoch). The rate is multiplied by the decay factor at epochs
/// 150, 300, ...; training stops once `patience` consecutive epochs fail to
/// improve strictly on the best loss, and the caller restores the weights of
/// best_epoch.
ScheduleDecision schedule_tick(const TrainingSchedule& schedule, int epoch, double current_lr,
                               std::span<const double> val_loss_history);

/// Learning rate in effect during `epoch` under the step schedule.
double scheduled_learning_rate(const TrainingSchedule& schedule, double initial_lr, int epoch);

}  // namespace smartjourney
