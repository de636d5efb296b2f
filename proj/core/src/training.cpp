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

#include "smartjourney/training.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "smartjourney/error.hpp"
#include "smartjourney/gbdt.hpp"
#include "smartjourney/loss.hpp"
#include "smartjourney/lstm.hpp"
#include "smartjourney/optimizer.hpp"
#include "smartjourney/transformer.hpp"

namespace smartjourney {
namespace {

double mean_huber(const NeuralNetwork& net, std::span<const WindowedSample> samples) {
  double sum = 0.0;
  for (const auto& s : samples) sum += huber(net.forward(net.parameters(), s.inputs) - s.target);
  return sum / static_cast<double>(samples.size());
}

TrainingLog fit_network(NeuralNetwork& net, const PreparedDataset& data, const TrainConfig& config,
                        const ProgressCallback& progress) {
  if (config.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be positive");
  const auto train = data.train();
  const auto validation = data.validation();

  ParameterStore& params = net.parameters();
  ParameterStore grads = params.zeros_like();
  ParameterStore best = params;
  SgdMomentum sgd(params, config.optimizer);
  Rng rng(config.seed ^ 0x5eed5eed5eedULL);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const Matrix*> windows;
  std::vector<double> targets;

  TrainingLog log;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < config.schedule.max_epochs; ++epoch) {
    const ScheduleDecision d = schedule_tick(config.schedule, epoch, sgd.learning_rate(), log.validation_loss);
    if (d.new_learning_rate) sgd.set_learning_rate(*d.new_learning_rate);
    if (d.stop) break;

    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t e = std::min(order.size(), b + config.batch_size);
      windows.clear();
      targets.clear();
      for (std::size_t i = b; i < e; ++i) {
        windows.push_back(&train[order[i]].inputs);
        targets.push_back(train[order[i]].target);
      }
      grads.set_zero();
      loss_sum += net.batch_gradient(params, windows, targets, grads);
      sgd.step(params, grads);
      ++batches;
    }

    const double val = mean_huber(net, validation);
    log.train_loss.push_back(loss_sum / static_cast<double>(batches));
    log.validation_loss.push_back(val);
    log.steps_run = epoch + 1;
    if (val < best_loss) {
      best_loss = val;
      best = params;
      log.best_step = epoch;
    }
    if (progress) progress({epoch, log.train_loss.back(), val});
  }
  params = std::move(best);
  return log;
}

std::vector<double> targets_of(std::span<const WindowedSample> samples) {
  std::vector<double> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(s.target);
  return y;
}

std::shared_ptr<const Regressor> fit_boosting(const PreparedDataset& data, const TrainConfig& config,
                                              TrainingLog& log, const ProgressCallback& progress) {
  const auto train = data.train();
  const auto validation = data.validation();
  BoostingResult r = train_boosting(tabular_matrix(train), targets_of(train), tabular_matrix(validation),
                                    targets_of(validation), config.boosting, config.seed);
  log.train_loss = r.train_rmse;
  log.validation_loss = r.validation_rmse;
  log.steps_run = static_cast<int>(r.train_rmse.size());
  log.best_step = static_cast<int>(r.best_round);
  if (progress) {
    for (std::size_t i = 0; i < r.train_rmse.size(); ++i) {
      progress({static_cast<int>(i), r.train_rmse[i], i < r.validation_rmse.size() ? r.validation_rmse[i] : 0.0});
    }
  }
  return std::make_shared<GbdtRegressor>(std::move(r.model), data.window, data.normalization.size());
}

}  // namespace

double seasonal_naive_predict(const Matrix& window, std::size_t season) {
  if (static_cast<std::size_t>(window.rows()) < season) {
    throw Error(ErrorCode::kInsufficientHistory, "seasonal-naive needs a window of at least one season");
  }
  return window(window.rows() - static_cast<Eigen::Index>(season), static_cast<Eigen::Index>(kTargetFeature));
}

TrainResult train_model(const PreparedDataset& dataset, const TrainConfig& config,
                        const ProgressCallback& progress) {
  if (dataset.train().empty() || dataset.validation().empty() || dataset.test().empty()) {
    throw Error(ErrorCode::kEmptyInput, "train, validation and test splits must all be non-empty");
  }
  const std::size_t features = dataset.normalization.size();

  TrainResult result;
  ModelArtifact& a = result.artifact;
  a.model_type = config.model_type;
  a.district = dataset.district;
  a.train_config = config;
  a.train_config.district = dataset.district;
  a.train_config.dataset.window = dataset.window;
  a.window = dataset.window;
  a.normalization = dataset.normalization;
  a.congestion = fit_congestion_thresholds(dataset.training_rows());

  switch (config.model_type) {
    case ModelType::kLstm: {
      LstmArchitecture arch = config.lstm;
      arch.window = dataset.window;
      arch.features = features;
      a.train_config.lstm = arch;
      auto net = std::make_shared<LstmNetwork>(arch, config.seed);
      result.log = fit_network(*net, dataset, config, progress);
      a.model = std::move(net);
      break;
    }
    case ModelType::kTransformer: {
      TransformerArchitecture arch = config.transformer;
      arch.window = dataset.window;
      arch.features = features;
      a.train_config.transformer = arch;
      auto net = std::make_shared<TransformerNetwork>(arch, config.seed);
      result.log = fit_network(*net, dataset, config, progress);
      a.model = std::move(net);
      break;
    }
    case ModelType::kGbdt:
      a.model = fit_boosting(dataset, config, result.log, progress);
      break;
  }
  a.test_metrics = evaluate(a, dataset).metrics;
  a.created_at = artifact_timestamp();
  return result;
}

Evaluation evaluate_predictor(const Predictor& model, std::span<const WindowedSample> samples,
                              const NormalizationParams& norm, double mape_floor) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to evaluate");
  Evaluation ev;
  ev.predictions.reserve(samples.size());
  std::vector<double> an, pn, ar, pr;
  for (const auto& s : samples) {
    PredictionRecord p;
    p.timestamp = s.target_timestamp;
    p.actual_normalized = s.target;
    p.predicted_normalized = model(s.inputs, s.target_timestamp);
    p.actual = norm.invert(kTargetFeature, p.actual_normalized);
    p.predicted = norm.invert(kTargetFeature, p.predicted_normalized);
    an.push_back(p.actual_normalized);
    pn.push_back(p.predicted_normalized);
    ar.push_back(p.actual);
    pr.push_back(p.predicted);
    ev.predictions.push_back(p);
  }
  ev.metrics = compute_metrics(an, pn, ar, pr, mape_floor);
  return ev;
}

Evaluation evaluate(const ModelArtifact& artifact, const PreparedDataset& dataset) {
  if (!artifact.model) throw Error(ErrorCode::kInvalidArgument, "artifact has no model");
  if (artifact.normalization.names() != dataset.normalization.names()) {
    throw Error(ErrorCode::kFeatureMismatch, "dataset features differ from the artifact's");
  }
  if (artifact.window != dataset.window) {
    throw Error(ErrorCode::kFeatureMismatch, "dataset window differs from the artifact's");
  }
  const auto samples = dataset.materialize(artifact.normalization);
  const auto test = std::span<const WindowedSample>(samples).subspan(dataset.splits.test.begin,
                                                                     dataset.splits.test.size());
  const auto& model = *artifact.model;
  return evaluate_predictor([&](const Matrix& w, Hour t) { return model.predict(w, t); }, test, artifact.normalization, artifact.train_config.mape_floor);
}

Evaluation evaluate_seasonal_naive(const PreparedDataset& dataset, double mape_floor) {
  return evaluate_predictor([](const Matrix& w, Hour) { return seasonal_naive_predict(w); }, dataset.test(), dataset.normalization, mape_floor);
}

}  // namespace smartjourney
