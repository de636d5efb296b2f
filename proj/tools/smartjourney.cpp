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

// smartjourney: ingest, train, evaluate, forecast and serve from one binary.
// Success output is one JSON document on stdout; diagnostics go to stderr.
// Exit status: 0 success, 1 runtime or data error, 2 usage error.

#include <glob.h>
#include <signal.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "smartjourney/artifact.hpp"
#include "smartjourney/error.hpp"
#include "smartjourney/forecast.hpp"
#include "smartjourney/ingest.hpp"
#include "smartjourney/service.hpp"
#include "smartjourney/training.hpp"

namespace sj = smartjourney;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 42;
  bool verbose = false;
};

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

std::vector<std::filesystem::path> expand(const std::vector<std::string>& patterns, const char* what) {
  std::vector<std::filesystem::path> out;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0) throw sj::Error(sj::ErrorCode::kIo, std::string("no ") + what + " file matches " + pattern);
  }
  return out;
}

std::vector<sj::HourlyDistrictRow> district_rows(const std::string& prepared, const std::string& district) {
  auto all = sj::read_prepared_csv(std::filesystem::path(prepared));
  auto rows = sj::rows_for_district(all, district);
  if (rows.empty()) throw sj::Error(sj::ErrorCode::kEmptyInput, "no prepared rows for " + district);
  return rows;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::vector<std::string> traffic;
  std::vector<std::string> weather;
  std::string out;
};

int run_ingest(const IngestArgs& a, const Globals& g) {
  const auto traffic_files = expand(a.traffic, "traffic");
  const auto weather_files = expand(a.weather, "weather");

  std::vector<sj::TrafficRecord> traffic;
  std::size_t traffic_skipped = 0;
  for (const auto& f : traffic_files) {
    auto r = sj::parse_traffic_csv(f);
    if (g.verbose) std::cerr << f.string() << ": " << r.records.size() << " traffic rows\n";
    traffic_skipped += r.skipped;
    traffic.insert(traffic.end(), std::make_move_iterator(r.records.begin()),
                   std::make_move_iterator(r.records.end()));
  }
  std::vector<sj::WeatherRecord> weather;
  std::size_t weather_skipped = 0;
  for (const auto& f : weather_files) {
    auto r = sj::parse_weather_csv(f);
    if (g.verbose) std::cerr << f.string() << ": " << r.records.size() << " weather rows\n";
    weather_skipped += r.skipped;
    weather.insert(weather.end(), r.records.begin(), r.records.end());
  }

  const auto& registry = sj::default_districts();
  const auto hourly = sj::aggregate_hourly(traffic, registry);
  const auto joined = sj::join_weather(hourly, weather);
  sj::write_prepared_csv(std::filesystem::path(a.out), joined.rows);

  json prepared_counts = json::object();
  for (const auto& row : joined.rows) {
    prepared_counts[row.district] = prepared_counts.value(row.district, 0) + 1;
  }
  const auto periods = sj::period_summary(traffic);
  auto period_json = [](const sj::PeriodTotals& p) {
    return json{{"total_vehicles", p.total_vehicles},
                {"record_count", p.record_count},
                {"mean_avg_speed", p.mean_avg_speed ? json(*p.mean_avg_speed) : json(nullptr)}};
  };
  emit({{"output", a.out},
        {"traffic_files", traffic_files.size()},
        {"weather_files", weather_files.size()},
        {"traffic_records", traffic.size()},
        {"traffic_skipped", traffic_skipped},
        {"weather_records", weather.size()},
        {"weather_skipped", weather_skipped},
        {"hourly_rows", hourly.size()},
        {"prepared_rows", joined.rows.size()},
        {"dropped_without_weather", joined.dropped},
        {"district_counts", sj::district_counts(traffic, registry)},
        {"prepared_rows_by_district", prepared_counts},
        {"period_summary", {{"morning", period_json(periods.morning)}, {"afternoon", period_json(periods.afternoon)}}}});
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string model;
  std::string district;
  std::string prepared;
  std::string out;
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> window;
};

int run_train(const TrainArgs& a, const Globals& g) {
  sj::TrainConfig config;
  config.model_type = *sj::parse_model_type(a.model);
  config.district = a.district;
  config.seed = g.seed;
  if (a.epochs) {
    config.schedule.max_epochs = *a.epochs;
    config.boosting.num_rounds = *a.epochs;
  }
  if (a.learning_rate) config.optimizer.learning_rate = *a.learning_rate;
  if (a.batch_size) config.batch_size = *a.batch_size;
  if (a.window) config.dataset.window = *a.window;

  const auto dataset = sj::prepare_dataset(district_rows(a.prepared, a.district), a.district, config.dataset);
  if (g.verbose) {
    std::cerr << "samples: train " << dataset.train().size() << ", validation " << dataset.validation().size()
              << ", test " << dataset.test().size() << "\n";
  }
  sj::ProgressCallback progress;
  if (g.verbose) {
    progress = [](const sj::TrainingProgress& p) {
      std::cerr << "step " << p.step << " train " << p.train_loss << " validation " << p.validation_loss << "\n";
    };
  }
  const auto result = sj::train_model(dataset, config, progress);
  sj::save_artifact(result.artifact, a.out);
  const auto baseline = sj::evaluate_seasonal_naive(dataset, config.mape_floor);
  emit({{"artifact", a.out},
        {"model_type", a.model},
        {"district", a.district},
        {"steps_run", result.log.steps_run},
        {"best_step", result.log.best_step},
        {"test_metrics", sj::metrics_to_json(result.artifact.test_metrics)},
        {"seasonal_naive_metrics", sj::metrics_to_json(baseline.metrics)}});
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string artifact;
  std::string prepared;
  std::string dump;
};

int run_evaluate(const EvaluateArgs& a, const Globals&) {
  const auto artifact = sj::load_artifact(a.artifact);
  const auto dataset = sj::prepare_dataset(district_rows(a.prepared, artifact.district), artifact.district,
                                           artifact.train_config.dataset);
  const auto ev = sj::evaluate(artifact, dataset);
  if (!a.dump.empty()) {
    std::ofstream out(a.dump);
    if (!out) throw sj::Error(sj::ErrorCode::kIo, "cannot write " + a.dump);
    out.precision(17);
    out << "timestamp,actual_normalized,predicted_normalized,actual,predicted\n";
    for (const auto& p : ev.predictions) {
      out << sj::format_hour_iso(p.timestamp) << ',' << p.actual_normalized << ',' << p.predicted_normalized << ','
          << p.actual << ',' << p.predicted << '\n';
    }
    if (!out) throw sj::Error(sj::ErrorCode::kIo, "write failed for " + a.dump);
  }
  emit({{"artifact", a.artifact},
        {"model_type", std::string(sj::model_type_name(artifact.model_type))},
        {"district", artifact.district},
        {"test_samples", ev.predictions.size()},
        {"mape_floor", artifact.train_config.mape_floor},
        {"test_metrics", sj::metrics_to_json(ev.metrics)}});
  return kExitOk;
}

// ---------------------------------------------------------------- forecast

struct ForecastArgs {
  std::string artifact;
  std::string prepared;
  std::string start;
  int horizon = sj::kDefaultHorizon;
};

int run_forecast(const ForecastArgs& a, const Globals&) {
  const auto artifact = sj::load_artifact(a.artifact);
  auto rows = district_rows(a.prepared, artifact.district);
  if (!a.start.empty()) {
    const auto start = sj::parse_hour(a.start);
    if (!start) throw sj::Error(sj::ErrorCode::kInvalidTimestamp, "cannot parse --start " + a.start);
    std::erase_if(rows, [&](const sj::HourlyDistrictRow& r) { return r.timestamp > *start; });
    if (rows.empty() || rows.back().timestamp != *start) {
      throw sj::Error(sj::ErrorCode::kInsufficientHistory, "no observation at " + sj::format_hour_iso(*start));
    }
  }
  emit(sj::forecast_to_json(sj::forecast(artifact, rows, a.horizon)));
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out;
  int days = 120;
  std::vector<std::string> districts{"TUZLA"};
};

int run_synth(const SynthArgs& a, const Globals& g) {
  std::vector<sj::HourlyDistrictRow> rows;
  for (std::size_t i = 0; i < a.districts.size(); ++i) {
    if (sj::find_district(sj::default_districts(), a.districts[i]) == nullptr) {
      throw sj::Error(sj::ErrorCode::kUnknownDistrict, "unknown district " + a.districts[i]);
    }
    sj::SynthParams p;
    p.seed = g.seed + i;
    p.days = a.days;
    p.district = a.districts[i];
    auto part = sj::synth_series(p);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.timestamp < y.timestamp; });
  sj::write_prepared_csv(std::filesystem::path(a.out), rows);
  emit({{"output", a.out}, {"rows", rows.size()}, {"districts", a.districts}});
  return kExitOk;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::string models_dir;
  std::string prepared;
  std::string host = "127.0.0.1";
  std::optional<int> port;
  std::vector<std::string> cors;
};

int run_serve(const ServeArgs& a, const Globals& g, const sigset_t& signals) {
  sj::ServiceConfig config;
  config.models_dir = a.models_dir;
  if (!a.prepared.empty()) config.prepared_path = a.prepared;
  config.host = a.host;
  if (a.port) {
    config.port = *a.port;
  } else if (const char* env = std::getenv("SMARTJOURNEY_PORT"); env != nullptr && *env != '\0') {
    try {
      config.port = std::stoi(env);
    } catch (const std::exception&) {
      throw sj::Error(sj::ErrorCode::kInvalidArgument, std::string("SMARTJOURNEY_PORT is not a number: ") + env);
    }
  }
  if (!a.cors.empty()) config.cors_origins = a.cors;

  const sj::ForecastService service(config);
  sj::HttpServer server(service, config.cors_origins);
  const int port = server.bind(config.host, config.port);
  if (g.verbose) std::cerr << "loaded " << service.artifact_count() << " artifacts\n";
  std::cerr << "listening on " << config.host << ":" << port << "\n";
  std::cout << json{{"status", "listening"}, {"host", config.host}, {"port", port}}.dump() << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() also returns if the listener fails; wake the waiter either way.
  ::kill(::getpid(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  // Block termination signals before any thread starts; serve collects them
  // with sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  CLI::App app{"Hourly district traffic forecasting"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_flag("-v,--verbose", globals.verbose, "Progress on stderr");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build the prepared hourly CSV from raw exports");
  ingest_cmd->add_option("--traffic", ingest.traffic, "Traffic CSV glob(s)")->required();
  ingest_cmd->add_option("--weather", ingest.weather, "Weather CSV glob(s)")->required();
  ingest_cmd->add_option("--out", ingest.out, "Prepared CSV to write")->required();

  const std::vector<std::string> model_names{"lstm", "transformer", "gbdt"};
  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one model for one district");
  train_cmd->add_option("--model", train.model, "lstm, transformer or gbdt")
      ->required()
      ->check(CLI::IsMember(model_names));
  train_cmd->add_option("--district", train.district, "District name")->required();
  train_cmd->add_option("--prepared", train.prepared, "Prepared CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Artifact file to write")->required();
  train_cmd->add_option("--epochs", train.epochs, "Neural epochs or boosting rounds")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--learning-rate", train.learning_rate, "Initial SGD learning rate")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", train.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--window", train.window, "Window length in hours")->check(CLI::PositiveNumber);

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score an artifact on its test split");
  evaluate_cmd->add_option("--artifact", evaluate.artifact, "Artifact file")->required();
  evaluate_cmd->add_option("--prepared", evaluate.prepared, "Prepared CSV")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--dump-predictions", evaluate.dump, "Write per-sample predictions as CSV");

  ForecastArgs forecast;
  auto* forecast_cmd = app.add_subcommand("forecast", "Multi-hour forecast from an artifact");
  forecast_cmd->add_option("--artifact", forecast.artifact, "Artifact file")->required();
  forecast_cmd->add_option("--prepared", forecast.prepared, "Prepared CSV")->required()->check(CLI::ExistingFile);
  forecast_cmd->add_option("--start", forecast.start, "Last observed hour (default: latest)");
  forecast_cmd->add_option("--horizon", forecast.horizon, "Hours to forecast")->capture_default_str();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic prepared CSV");
  synth_cmd->add_option("--out", synth.out, "Prepared CSV to write")->required();
  synth_cmd->add_option("--days", synth.days, "Days of hourly data")->capture_default_str()->check(CLI::Range(1, 3650));
  synth_cmd->add_option("--district", synth.districts, "District name(s)")->capture_default_str();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP forecast service");
  serve_cmd->add_option("--models-dir", serve.models_dir, "Directory of artifacts")->required();
  serve_cmd->add_option("--prepared", serve.prepared, "Prepared CSV for history")->check(CLI::ExistingFile);
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port (default SMARTJOURNEY_PORT or 8080; 0 picks one)")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--cors-origin", serve.cors, "Allowed CORS origin(s); default *");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest, globals);
    if (*train_cmd) return run_train(train, globals);
    if (*evaluate_cmd) return run_evaluate(evaluate, globals);
    if (*forecast_cmd) return run_forecast(forecast, globals);
    if (*synth_cmd) return run_synth(synth, globals);
    if (*serve_cmd) return run_serve(serve, globals, signals);
  } catch (const sj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit({{"error", std::string(e.code_name())}, {"message", e.what()}});
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit({{"error", "internal_error"}, {"message", e.what()}});
    return kExitRuntime;
  }
  return kExitUsage;
}
