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

#include <functional>
#include <span>
#include <vector>

#include "smartjourney/artifact.hpp"
#include "smartjourney/dataset.hpp"
#include "smartjourney/metrics.hpp"
#include "smartjourney/regressor.hpp"
#include "smartjourney/train_config.hpp"

namespace smartjourney {

/// Per-epoch (neural) or per-round (boosting) progress.
struct TrainingProgress {
  int step = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainingLog {
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  int steps_run = 0;
  int best_step = -1;  // -1 when nothing ran
};

struct TrainResult {
  ModelArtifact artifact;
  TrainingLog log;
};

using ProgressCallback = std::function<void(const TrainingProgress&)>;

/// Trains the configured family on the dataset's train split (validation
/// drives early stopping) and scores the test split. Throws Error(kEmptyInput)
/// when any split is empty and kInvalidArgument for window or feature
/// mismatches between the config and the dataset.
TrainResult train_model(const PreparedDataset& dataset, const TrainConfig& config,
                        const ProgressCallback& progress = {});

/// Value `season` hours before the target: window row W - season, normalized.
/// Throws Error(kInsufficientHistory) for windows shorter than a season.
double seasonal_naive_predict(const Matrix& window, std::size_t season = 24);

using Predictor = std::function<double(const Matrix& window, Hour target_time)>;

struct PredictionRecord {
  Hour timestamp{};
  double actual_normalized = 0.0;
  double predicted_normalized = 0.0;
  double actual = 0.0;
  double predicted = 0.0;
};

struct Evaluation {
  MetricReport metrics;
  std::vector<PredictionRecord> predictions;
};

/// One-step predictions of `model` over `samples` (already normalized with
/// `norm`); MAE/RMSE on normalized values, MAPE on vehicle counts.
Evaluation evaluate_predictor(const Predictor& model, std::span<const WindowedSample> samples,
                              const NormalizationParams& norm, double mape_floor = kDefaultMapeFloor);

/// Scores an artifact on the dataset's test split, renormalized with the
/// artifact's own parameters. Throws Error(kFeatureMismatch) when feature
/// names or the window length disagree.
Evaluation evaluate(const ModelArtifact& artifact, const PreparedDataset& dataset);

/// Seasonal-naive score on the dataset's test split.
Evaluation evaluate_seasonal_naive(const PreparedDataset& dataset,
                                   double mape_floor = kDefaultMapeFloor);

}  // namespace smartjourney
