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

#include "smartjourney/optimizer.hpp"

#include <cmath>

#include "smartjourney/error.hpp"

namespace smartjourney {

SgdMomentum::SgdMomentum(const ParameterStore& params, SgdConfig config)
    : config_(config), velocity_(params.zeros_like()) {}

void SgdMomentum::step(ParameterStore& params, const ParameterStore& grads) {
  if (!params.same_layout(grads) || !params.same_layout(velocity_)) {
    throw Error(ErrorCode::kInvalidArgument, "sgd_step: parameter/gradient layout mismatch");
  }
  const double mu = config_.momentum;
  const double lr = config_.learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params.at(i).values();
    auto g = grads.at(i).values();
    auto v = velocity_.at(i).values();
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = mu * v[k] - lr * g[k];
      p[k] += v[k];
    }
  }
}

ScheduleDecision schedule_tick(const TrainingSchedule& schedule, int epoch, double current_lr,
                               std::span<const double> val_loss_history) {
  ScheduleDecision decision;
  if (epoch > 0 && schedule.lr_decay_every > 0 && epoch % schedule.lr_decay_every == 0) {
    decision.new_learning_rate = current_lr * schedule.lr_decay_factor;
  }
  int best = -1;
  int since_best = 0;
  for (std::size_t i = 0; i < val_loss_history.size(); ++i) {
    if (best < 0 || val_loss_history[i] < val_loss_history[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  if (best >= 0) decision.best_epoch = best;
  decision.stop = since_best >= schedule.early_stop_patience;
  return decision;
}

double scheduled_learning_rate(const TrainingSchedule& schedule, double initial_lr, int epoch) {
  if (schedule.lr_decay_every <= 0) return initial_lr;
  return initial_lr * std::pow(schedule.lr_decay_factor, epoch / schedule.lr_decay_every);
}

}  // namespace smartjourney
