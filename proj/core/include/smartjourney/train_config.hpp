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

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "smartjourney/dataset.hpp"
#include "smartjourney/gbdt.hpp"
#include "smartjourney/lstm.hpp"
#include "smartjourney/metrics.hpp"
#include "smartjourney/optimizer.hpp"
#include "smartjourney/regressor.hpp"
#include "smartjourney/transformer.hpp"

namespace smartjourney {

/// Everything needed to reproduce one training run. Neural runs use
/// `schedule.max_epochs` epochs at most; boosting uses `boosting.num_rounds`.
struct TrainConfig {
  ModelType model_type = ModelType::kGbdt;
  std::string district;
  std::uint64_t seed = 42;
  std::size_t batch_size = 32;
  SgdConfig optimizer;
  TrainingSchedule schedule;
  BoostingConfig boosting;
  LstmArchitecture lstm;
  TransformerArchitecture transformer;
  DatasetOptions dataset;
  double mape_floor = kDefaultMapeFloor;
};

nlohmann::json train_config_to_json(const TrainConfig& config);
/// Throws Error(kSchema) on missing or mistyped fields.
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace smartjourney
