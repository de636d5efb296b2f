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

// Acceptance suite: one PASS/FAIL/SKIP line per criterion; exit status 1 when
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartjourney/artifact.hpp"
#include "smartjourney/dataset.hpp"
#include "smartjourney/error.hpp"
#include "smartjourney/gbdt.hpp"
#include "smartjourney/geo.hpp"
#include "smartjourney/grad_check.hpp"
#include "smartjourney/ingest.hpp"
#include "smartjourney/lstm.hpp"
#include "smartjourney/metrics.hpp"
#include "smartjourney/service.hpp"
#include "smartjourney/training.hpp"
#include "smartjourney/transformer.hpp"
#include "support/fixtures.hpp"
#include "support/gbdt_oracle.hpp"
#include "support/json_schema.hpp"

// Last: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace sj = smartjourney;
namespace st = smartjourney::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome = Outcome::kPass;
  std::string detail;
};

Verdict pass(std::string detail) { return {Outcome::kPass, std::move(detail)}; }
Verdict fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Verdict skip(std::string detail) { return {Outcome::kSkip, std::move(detail)}; }

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

// Gradient correctness at full default size.

template <class Network, class Architecture>
double worst_gradient_error(std::uint64_t seed, std::string& where) {
  const Architecture arch;
  Network net(arch, seed);
  std::mt19937_64 rng(seed + 1000);
  const sj::Matrix window = st::random_window(arch.window, arch.features, rng);
  double worst = 0.0;
  for (double target : {0.2, 5.0}) {  // quadratic and linear Huber branches
    sj::ParameterStore grads = net.parameters().zeros_like();
    net.sample_gradient(net.parameters(), window, target, grads);
    const auto r = sj::grad_check([&](const sj::ParameterStore& p) { return net.sample_loss(p, window, target); },
                                  net.parameters(), grads, {1e-5, 50, seed});
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      where = r.worst_parameter;
    }
  }
  return worst;
}

Verdict gradient_correctness() {
  const auto start = std::chrono::steady_clock::now();
  const sj::LstmArchitecture lstm;
  const sj::TransformerArchitecture transformer;
  if (lstm.window != 24 || lstm.features != 6 || transformer.window != 24 || transformer.features != 6) {
    return fail("default architecture is not W=24, F=6");
  }
  double worst = 0.0;
  std::string where;
  for (std::uint64_t seed : {1u, 2u}) {
    std::string w;
    const double e = worst_gradient_error<sj::LstmNetwork, sj::LstmArchitecture>(seed, w);
    if (e >= worst) worst = e, where = "lstm " + w;
    const double t = worst_gradient_error<sj::TransformerNetwork, sj::TransformerArchitecture>(seed, w);
    if (t >= worst) worst = t, where = "transformer " + w;
  }
  const double elapsed = seconds_since(start);
  const std::string detail = "max rel error " + fmt(worst, 3) + " at " + where + ", " + fmt(elapsed, 3) + " s";
  return worst < 1e-4 && elapsed < 60.0 ? pass(detail) : fail(detail);
}

// Metrics.

Verdict metric_oracle() {
  const json cases = load_json(fs::path(SMARTJOURNEY_ORACLE_DIR) / "metric_vectors.json");
  if (cases.size() != 100) return fail("expected 100 oracle vectors");
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  std::size_t n = 0;
  for (const auto& c : cases) {
    const auto actual = c.at("actual").get<std::vector<double>>();
    const auto predicted = c.at("predicted").get<std::vector<double>>();
    const auto r = sj::compute_metrics(actual, predicted, c.at("floor").get<double>());
    const auto& e = c.at("expected");
    bool ok = close(r.mae, e.at("mae").get<double>()) && close(r.rmse, e.at("rmse").get<double>()) &&
              r.excluded_count == e.at("excluded_count").get<std::size_t>() && r.rmse >= r.mae;
    if (e.at("mape_percent").is_null()) {
      ok = ok && !r.mape_percent;
    } else {
      ok = ok && r.mape_percent && close(*r.mape_percent, e.at("mape_percent").get<double>());
    }
    if (!ok) return fail("vector " + std::to_string(n) + " differs from oracle");
    ++n;
  }
  return pass(std::to_string(n) + " vectors within 1e-12, RMSE >= MAE on all");
}

Verdict worked_example() {
  const std::vector<double> actual{100, 200}, predicted{90, 220};
  const auto r = sj::compute_metrics(actual, predicted);
  const bool ok = r.mape_percent && std::abs(*r.mape_percent - 10.0) < 1e-12 && std::abs(r.mae - 15.0) < 1e-12 &&
                  std::abs(r.rmse - 15.8114) < 5e-5;
  const std::string detail = "MAPE " + (r.mape_percent ? fmt(*r.mape_percent) : "none") + "%, MAE " + fmt(r.mae) +
                             ", RMSE " + fmt(r.rmse);
  return ok ? pass(detail) : fail(detail);
}

// Boosting.

sj::FeatureMatrix random_features(std::size_t n, std::size_t f, std::mt19937_64& rng, bool integer) {
  sj::FeatureMatrix x(n, f);
  std::uniform_int_distribution<int> ints(0, 5);
  std::uniform_real_distribution<double> reals(-3, 3);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < f; ++c) x(r, c) = integer ? ints(rng) : reals(rng);
  }
  return x;
}

Verdict gbdt_oracle() {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 64)(rng);
    const std::size_t f = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const auto x = random_features(n, f, rng, trial % 2 == 0);
    std::vector<double> g(n), h(n);
    std::uniform_int_distribution<int> gi(-6, 6), hi(1, 3);
    for (std::size_t r = 0; r < n; ++r) {
      g[r] = gi(rng);
      h[r] = trial % 3 == 0 ? hi(rng) : 1.0;
    }
    sj::BoostingConfig cfg;
    cfg.max_depth = std::uniform_int_distribution<int>(1, 5)(rng);
    cfg.min_child_weight = std::uniform_int_distribution<int>(1, 4)(rng);
    cfg.lambda = std::array{0.0, 1.0, 2.5}[trial % 3];
    std::vector<std::size_t> rows(n);
    for (std::size_t r = 0; r < n; ++r) rows[r] = r;

    const auto tree = sj::build_tree(x, rows, g, h, cfg);
    const auto oracle = st::oracle_tree(x, rows, g, h, cfg);
    if (auto d = st::tree_difference(tree, 0, *oracle); !d.empty()) {
      return fail("dataset " + std::to_string(trial) + ": " + d);
    }
    // Leaf weights recomputed from the rows each leaf receives.
    std::vector<double> G(tree.nodes().size()), H(tree.nodes().size());
    for (std::size_t r : rows) {
      const auto leaf = tree.leaf_index(x.row(r));
      G[leaf] += g[r];
      H[leaf] += h[r];
    }
    for (std::size_t k = 0; k < tree.nodes().size(); ++k) {
      const auto& node = tree.nodes()[k];
      if (node.is_leaf() && node.weight != -G[k] / (H[k] + cfg.lambda)) {
        return fail("dataset " + std::to_string(trial) + ": leaf weight is not -G/(H+lambda)");
      }
    }
  }

  std::mt19937_64 drng(77);
  const auto x = random_features(300, 5, drng, false);
  std::vector<double> y(300);
  std::normal_distribution<double> noise(0, 0.1);
  for (std::size_t r = 0; r < 300; ++r) y[r] = std::sin(x(r, 0)) + x(r, 1) * x(r, 2) + noise(drng);
  sj::BoostingConfig cfg;
  cfg.subsample = 1.0;
  cfg.num_rounds = 50;
  cfg.early_stop_rounds = 1000;
  const auto res = sj::train_boosting(x, y, x, y, cfg, 1);
  if (res.train_rmse.size() != 50) return fail("expected 50 rounds");
  for (std::size_t i = 1; i < res.train_rmse.size(); ++i) {
    if (res.train_rmse[i] > res.train_rmse[i - 1]) return fail("training RMSE rose at round " + std::to_string(i));
  }
  return pass("200 datasets equal the exhaustive oracle, leaves exact; RMSE " + fmt(res.train_rmse.front(), 4) +
              " -> " + fmt(res.train_rmse.back(), 4) + " non-increasing over 50 rounds");
}

// Geospatial.

Verdict geospatial() {
  const json pairs = load_json(fs::path(SMARTJOURNEY_ORACLE_DIR) / "haversine_pairs.json");
  if (pairs.size() != 1000) return fail("expected 1000 oracle pairs");
  double worst = 0.0;
  for (const auto& p : pairs) {
    const sj::LatLon a{p["a"][0].get<double>(), p["a"][1].get<double>()};
    const sj::LatLon b{p["b"][0].get<double>(), p["b"][1].get<double>()};
    worst = std::max(worst, std::abs(sj::haversine_km(a, b) - p["km"].get<double>()));
  }
  if (worst >= 5e-5) return fail("haversine off by " + fmt(worst, 3) + " km");

  const json grid = load_json(fs::path(SMARTJOURNEY_ORACLE_DIR) / "district_grid.json");
  if (grid.size() != 100) return fail("expected 100 probe points");
  const auto& registry = sj::default_districts();
  for (const auto& p : grid) {
    const sj::LatLon point{p["lat"].get<double>(), p["lon"].get<double>()};
    // Brute-force nearest with first-wins ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < registry.size(); ++i) {
      if (sj::haversine_km(point, registry[i].location) < sj::haversine_km(point, registry[best].location)) best = i;
    }
    const auto& got = sj::assign_district(point, registry);
    if (got != registry[best].name || got != p["district"].get<std::string>()) {
      return fail("probe (" + fmt(point.latitude) + ", " + fmt(point.longitude) + ") assigned " + got);
    }
  }

  const std::vector<std::tuple<std::string, double, double>> reference = {
      {"TUZLA", 40.8457, 29.3584},    {"BAGCILAR", 41.0356, 28.8534}, {"BUYUK_CEKMECE", 41.0223, 28.5749},
      {"ATASEHIR", 40.9937, 29.1388}, {"KAGITHANE", 41.0822, 28.9862}, {"FATIH", 41.0151, 28.9551}};
  if (registry.size() != reference.size()) return fail("registry size " + std::to_string(registry.size()));
  for (const auto& [name, lat, lon] : reference) {
    if (sj::assign_district({lat, lon}, registry) != name) return fail(name + " does not map to itself");
  }
  return pass("1000 pairs within " + fmt(worst, 3) + " km, 100 probes match brute force, 6 registry points map to themselves");
}

// End-to-end desk-scale run.

sj::TrainConfig e2e_config(sj::ModelType type) {
  sj::TrainConfig c;
  c.model_type = type;
  c.district = "TUZLA";
  c.seed = 42;
  c.optimizer.learning_rate = 1e-3;
  c.schedule.max_epochs = 30;
  c.boosting.num_rounds = 200;
  return c;
}

Verdict end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  sj::SynthParams params;
  params.seed = 2026;
  params.days = 120;
  const auto dataset = sj::prepare_dataset(sj::synth_series(params), "TUZLA");
  const auto naive = sj::evaluate_seasonal_naive(dataset);
  if (!naive.metrics.mape_percent) return fail("seasonal-naive MAPE undefined");
  const double baseline = *naive.metrics.mape_percent;

  std::string detail = "naive " + fmt(baseline, 4) + "%";
  bool ok = true;
  for (auto type : {sj::ModelType::kGbdt, sj::ModelType::kLstm, sj::ModelType::kTransformer}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = sj::train_model(dataset, e2e_config(type));
    const auto& mape = result.artifact.test_metrics.mape_percent;
    const bool beats = mape && *mape < baseline;
    ok = ok && beats;
    detail += std::string(", ") + std::string(sj::model_type_name(type)) + " " + (mape ? fmt(*mape, 4) : "none") +
              "% (" + std::to_string(result.log.steps_run) + " steps, " + fmt(seconds_since(t0), 3) + " s)";
  }
  const double elapsed = seconds_since(start);
  detail += ", total " + fmt(elapsed, 4) + " s";
  return ok && elapsed < 15 * 60 ? pass(detail) : fail(detail);
}

// Conditional real-data checks. SMARTJOURNEY_REAL_DATA names a directory with
// traffic/*.csv (monthly files, the lexicographically first is the first
// month) and weather.csv.

Verdict real_data(const char* root) {
  if (root == nullptr || *root == '\0') return skip("SMARTJOURNEY_REAL_DATA not set");
  const fs::path dir(root);
  std::vector<fs::path> traffic_files;
  for (const auto& e : fs::directory_iterator(dir / "traffic")) {
    if (e.path().extension() == ".csv") traffic_files.push_back(e.path());
  }
  std::sort(traffic_files.begin(), traffic_files.end());
  if (traffic_files.empty()) return fail("no traffic CSV files under " + (dir / "traffic").string());

  const auto& registry = sj::default_districts();
  std::vector<sj::TrafficRecord> records;
  sj::PeriodSummary first_month;
  for (std::size_t i = 0; i < traffic_files.size(); ++i) {
    auto parsed = sj::parse_traffic_csv(traffic_files[i]);
    if (i == 0) first_month = sj::period_summary(parsed.records);
    records.insert(records.end(), parsed.records.begin(), parsed.records.end());
  }
  const std::map<std::string, std::size_t> expected = {
      {"ATASEHIR", 3125813}, {"KAGITHANE", 2487811}, {"TUZLA", 1296943},
      {"BAGCILAR", 2939100}, {"BUYUK_CEKMECE", 3522664}, {"FATIH", 811283}};
  const auto counts = sj::district_counts(records, registry);
  std::string detail;
  bool ok = true;
  for (const auto& [name, n] : expected) {
    const auto it = counts.find(name);
    const std::size_t got = it == counts.end() ? 0 : it->second;
    if (got != n) {
      ok = false;
      detail += name + " " + std::to_string(got) + " != " + std::to_string(n) + "; ";
    }
  }
  if (first_month.morning.total_vehicles != 816233 || first_month.afternoon.total_vehicles != 1091036) {
    ok = false;
    detail += "periods " + std::to_string(first_month.morning.total_vehicles) + "/" +
              std::to_string(first_month.afternoon.total_vehicles) + "; ";
  }
  const auto weather = sj::parse_weather_csv(dir / "weather.csv");
  const auto joined = sj::join_weather(sj::aggregate_hourly(records, registry), weather.records);
  const auto tuzla = sj::rows_for_district(joined.rows, "TUZLA").size();
  if (tuzla + 5 < 7891 || tuzla > 7891 + 5) ok = false;
  detail += "TUZLA prepared rows " + std::to_string(tuzla);
  return ok ? pass(detail) : fail(detail);
}

// Persistence.

Verdict persistence() {
  const auto data = st::synthetic_dataset(30, 5);
  st::TempDir dir;
  std::string detail;
  for (const auto& config : {st::quick_gbdt_config(30), st::quick_lstm_config(1), st::quick_transformer_config(1)}) {
    const auto artifact = sj::train_model(data, config).artifact;
    const std::string name(sj::model_type_name(config.model_type));
    const fs::path path = dir / (name + ".json");
    sj::save_artifact(artifact, path);
    const auto loaded = sj::load_artifact(path);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
      const auto window = st::random_window(artifact.window, sj::kModelFeatures.size(), rng);
      const sj::Hour when = data.rows.back().timestamp + std::chrono::hours(i);
      const double a = artifact.model->predict(window, when);
      const double b = loaded.model->predict(window, when);
      if (std::memcmp(&a, &b, sizeof a) != 0) return fail(name + " prediction " + std::to_string(i) + " differs");
    }

    json j = load_json(path);
    if (config.model_type == sj::ModelType::kGbdt) {
      auto& node = j["payload"]["trees"][0][0];
      const char* key = node.contains("threshold") ? "threshold" : "leaf";
      node[key] = node[key].get<double>() + 1e-3;
    } else {
      auto& field = j["payload"]["tensors"][0]["data"];
      std::string s = field.get<std::string>();
      s[4] = s[4] == 'A' ? 'B' : 'A';
      field = s;
    }
    const fs::path bad = dir / (name + ".bad.json");
    st::write_file(bad, j.dump());
    try {
      sj::load_artifact(bad);
      return fail(name + " corrupted artifact loaded");
    } catch (const sj::Error& e) {
      if (e.code() != sj::ErrorCode::kChecksumMismatch) return fail(name + " corruption reported as " + std::string(e.code_name()));
    }
    detail += name + " ";
  }
  return pass(detail + "bit-identical on 100 windows; corruption rejected with checksum_mismatch");
}

// Service contract.

Verdict service_contract() {
  const auto data = st::synthetic_dataset(20, 9);
  const auto gbdt = sj::train_model(data, st::quick_gbdt_config(10)).artifact;
  const sj::ForecastService service({gbdt}, data.rows);
  const st::SchemaSet schemas(SMARTJOURNEY_SCHEMA_DIR);

  std::vector<std::string> problems;
  auto check = [&](const std::string& schema, const sj::ApiResponse& r, int status) {
    if (r.status != status) problems.push_back(schema + " status " + std::to_string(r.status));
    for (const auto& e : schemas.validate(schema, r.body)) problems.push_back(schema + ": " + e);
  };

  const auto forecast = service.handle("GET", "/v1/forecast", {{"district", "TUZLA"}});
  check("forecast.schema.json", forecast, 200);
  std::size_t points = 0;
  if (forecast.status == 200) {
    const auto& p = forecast.body.at("points");
    points = p.size();
    std::optional<sj::Hour> previous = sj::parse_hour(forecast.body.at("generated_at").get<std::string>());
    for (const auto& point : p) {
      const auto ts = sj::parse_hour(point.at("ts").get<std::string>());
      if (!ts || !previous || *ts - *previous != std::chrono::hours(1)) problems.push_back("points not strictly hourly");
      previous = ts;
    }
  }
  if (points != 12) problems.push_back("default forecast has " + std::to_string(points) + " points");

  const auto unknown = service.handle("GET", "/v1/forecast", {{"district", "NOWHERE"}});
  check("error.schema.json", unknown, 404);
  if (unknown.body.value("error", "") != "unknown_district") problems.push_back("unknown district code");

  check("health.schema.json", service.handle("GET", "/health", {}), 200);
  check("districts.schema.json", service.handle("GET", "/v1/districts", {}), 200);
  check("models.schema.json", service.handle("GET", "/v1/models", {}), 200);
  check("history.schema.json", service.handle("GET", "/v1/history", {{"district", "TUZLA"}}), 200);
  check("error.schema.json", service.handle("GET", "/v1/forecast", {}), 400);
  check("error.schema.json", service.handle("GET", "/v1/forecast", {{"district", "TUZLA"}, {"horizon", "49"}}), 400);
  check("error.schema.json", service.handle("GET", "/v1/forecast", {{"district", "FATIH"}}), 404);
  check("error.schema.json", service.handle("GET", "/nope", {}), 404);

  // The same contract over HTTP.
  sj::HttpServer server(service, {"*"});
  const int port = server.bind("127.0.0.1", 0);
  std::thread runner([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  const auto http_forecast = client.Get("/v1/forecast?district=TUZLA");
  const auto http_unknown = client.Get("/v1/forecast?district=NOWHERE");
  server.stop();
  runner.join();
  if (!http_forecast || http_forecast->status != 200 ||
      json::parse(http_forecast->body) != forecast.body) {
    problems.push_back("HTTP forecast differs from in-process response");
  }
  if (!http_unknown || http_unknown->status != 404 ||
      http_unknown->get_header_value("Content-Type").find("application/json") == std::string::npos ||
      !schemas.validate("error.schema.json", json::parse(http_unknown->body)).empty()) {
    problems.push_back("HTTP unknown district is not a 404 JSON error");
  }

  if (!problems.empty()) return fail(problems.front() + " (" + std::to_string(problems.size()) + " problems)");
  return pass("12 hourly points, unknown district 404 JSON, 10 responses schema-valid in process and over HTTP");
}

}  // namespace

int main(int argc, char** argv) {
  const char* real = std::getenv("SMARTJOURNEY_REAL_DATA");
  if (argc > 1) real = argv[1];

  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"gradient_correctness", gradient_correctness},
      {"metric_oracle", metric_oracle},
      {"metric_worked_example", worked_example},
      {"gbdt_oracle_equivalence", gbdt_oracle},
      {"geospatial", geospatial},
      {"end_to_end_desk_scale", end_to_end},
      {"real_data", [real] { return real_data(real); }},
      {"persistence", persistence},
      {"service_contract", service_contract},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* label = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::kFail) ++failures;
    std::cout << label << "  " << c.name << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
