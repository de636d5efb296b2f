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

#include <gtest/gtest.h>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "support/fixtures.hpp"
#include "support/json_schema.hpp"

// Last: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace st = smartjourney::testing;
using nlohmann::json;

namespace {

struct Outcome {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Starts the CLI with stdout/stderr redirected into files under `dir`.
pid_t spawn(const std::vector<std::string>& args, const st::TempDir& dir, const std::vector<std::string>& env = {}) {
  std::vector<std::string> argv_store{SMARTJOURNEY_CLI};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  const std::string out = (dir / "stdout.txt").string(), err = (dir / "stderr.txt").string();
  const pid_t pid = fork();
  if (pid == 0) {
    const int o = open(out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int e = open(err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    dup2(o, STDOUT_FILENO);
    dup2(e, STDERR_FILENO);
    for (const auto& kv : env) putenv(const_cast<char*>(kv.c_str()));
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);
    execv(argv[0], argv.data());
    _exit(127);
  }
  return pid;
}

int wait_exit(pid_t pid) {
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

Outcome run(const std::vector<std::string>& args, const std::vector<std::string>& env = {}) {
  st::TempDir io;
  Outcome o;
  o.exit_code = wait_exit(spawn(args, io, env));
  o.out = st::read_file(io / "stdout.txt");
  o.err = st::read_file(io / "stderr.txt");
  return o;
}

json parse_stdout(const Outcome& o) {
  try {
    return json::parse(o.out);
  } catch (const json::exception&) {
    ADD_FAILURE() << "stdout is not JSON: " << o.out << "\nstderr: " << o.err;
    return {};
  }
}

struct Workspace {
  st::TempDir dir;
  std::string prepared = (dir / "prepared.csv").string();
  std::string gbdt = (dir / "gbdt.json").string();
  Workspace() {
    const auto s = run({"synth", "--out", prepared, "--days", "20", "--district", "TUZLA"});
    EXPECT_EQ(s.exit_code, 0) << s.err;
    const auto t = run({"train", "--model", "gbdt", "--district", "TUZLA", "--prepared", prepared, "--out", gbdt,
                        "--epochs", "20"},
                       {"SOURCE_DATE_EPOCH=1700000000"});
    EXPECT_EQ(t.exit_code, 0) << t.err;
  }
};

const Workspace& workspace() {
  static const Workspace w;
  return w;
}

}  // namespace

TEST(Cli, IngestWritesPreparedCsvAndSummary) {
  st::TempDir dir;
  st::write_file(dir / "traffic_1.csv",
                 "_id,DATE_TIME,LONGITUDE,LATITUDE,GEOHASH,MINIMUM_SPEED,MAXIMUM_SPEED,AVERAGE_SPEED,NUMBER_OF_VEHICLES\n"
                 "1,2020-05-01 02:00:00,29.3584,40.8457,a,10,120,50,10\n"
                 "2,2020-05-01 02:00:00,29.3584,40.8457,a,10,120,70,30\n"
                 "3,2020-05-01 03:00:00,28.9551,41.0151,b,10,120,40,5\n");
  st::write_file(dir / "weather_1.csv",
                 "LOC_NAME,YEAR,MO,DY,HR,T2M,QV2M,WS2M,WD2M,PRECTOTCORR\n"
                 "TUZLA,2020,5,1,2,1415,891,165,24076,0\n");
  const auto out = (dir / "prepared.csv").string();
  const auto o = run({"ingest", "--traffic", (dir / "traffic_*.csv").string(), "--weather",
                      (dir / "weather_*.csv").string(), "--out", out});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto summary = parse_stdout(o);
  EXPECT_TRUE(std::filesystem::exists(out));
  EXPECT_EQ(summary.at("hourly_rows"), 2);
  EXPECT_EQ(summary.at("prepared_rows"), 1);
  EXPECT_EQ(summary.at("dropped_without_weather"), 1);
  EXPECT_EQ(summary.at("prepared_rows_by_district").at("TUZLA"), 1);
  EXPECT_NE(st::read_file(out).find("TUZLA"), std::string::npos);
}

TEST(Cli, IngestWithMissingWeatherLeavesNoOutput) {
  st::TempDir dir;
  st::write_file(dir / "t.csv", "_id,DATE_TIME,LONGITUDE,LATITUDE,GEOHASH,MINIMUM_SPEED,MAXIMUM_SPEED,AVERAGE_SPEED,"
                                "NUMBER_OF_VEHICLES\n");
  const auto out = (dir / "prepared.csv").string();
  const auto o = run({"ingest", "--traffic", (dir / "t.csv").string(), "--weather", (dir / "nope_*.csv").string(),
                      "--out", out});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_FALSE(std::filesystem::exists(out));
  EXPECT_EQ(parse_stdout(o).at("error"), "io_error");
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, TrainIsDeterministicUnderSourceDateEpoch) {
  const auto& w = workspace();
  st::TempDir dir;
  const auto again = (dir / "again.json").string();
  const auto o = run({"train", "--model", "gbdt", "--district", "TUZLA", "--prepared", w.prepared, "--out", again,
                      "--epochs", "20"},
                     {"SOURCE_DATE_EPOCH=1700000000"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  EXPECT_EQ(st::read_file(again), st::read_file(w.gbdt));
  const auto j = parse_stdout(o);
  EXPECT_TRUE(j.at("test_metrics").at("mape_percent").is_number());
  EXPECT_TRUE(j.at("seasonal_naive_metrics").is_object());
  const st::SchemaSet schemas(SMARTJOURNEY_SCHEMA_DIR);
  EXPECT_TRUE(schemas.validate("artifact.schema.json", json::parse(st::read_file(again))).empty());
}

TEST(Cli, UsageErrorsExitTwo) {
  const auto& w = workspace();
  EXPECT_EQ(run({"train", "--model", "rnn", "--district", "TUZLA", "--prepared", w.prepared, "--out", "x.json"}).exit_code, 2);
  EXPECT_EQ(run({"train", "--bogus-flag"}).exit_code, 2);
  EXPECT_EQ(run({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(run({"forecast", "--artifact", w.gbdt, "--prepared", w.prepared, "--horizon", "many"}).exit_code, 2);
  EXPECT_EQ(run({"--help"}).exit_code, 0);
}

TEST(Cli, EvaluateReplaysEmbeddedMetrics) {
  const auto& w = workspace();
  st::TempDir dir;
  const auto dump = (dir / "pred.csv").string();
  const auto o = run({"evaluate", "--artifact", w.gbdt, "--prepared", w.prepared, "--dump-predictions", dump});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto artifact = json::parse(st::read_file(w.gbdt));
  EXPECT_EQ(parse_stdout(o).at("test_metrics"), artifact.at("test_metrics"));
  EXPECT_EQ(st::read_file(dump).rfind("timestamp,actual_normalized,predicted_normalized,actual,predicted", 0), 0u);
}

TEST(Cli, ForecastTwelveHours) {
  const auto& w = workspace();
  const auto o = run({"forecast", "--artifact", w.gbdt, "--prepared", w.prepared, "--horizon", "12"});
  ASSERT_EQ(o.exit_code, 0) << o.err;
  const auto j = parse_stdout(o);
  EXPECT_EQ(j.at("points").size(), 12u);
  const st::SchemaSet schemas(SMARTJOURNEY_SCHEMA_DIR);
  EXPECT_TRUE(schemas.validate("forecast.schema.json", j).empty());
  EXPECT_EQ(run({"forecast", "--artifact", w.gbdt, "--prepared", w.prepared, "--horizon", "49"}).exit_code, 1);
}

TEST(Cli, ForecastWithThreeHoursOfHistory) {
  const auto& w = workspace();
  st::TempDir dir;
  const std::string text = st::read_file(w.prepared);
  std::size_t pos = 0;
  for (int line = 0; line < 4; ++line) pos = text.find('\n', pos) + 1;  // header + 3 rows
  const auto short_csv = (dir / "short.csv").string();
  st::write_file(short_csv, text.substr(0, pos));
  const auto o = run({"forecast", "--artifact", w.gbdt, "--prepared", short_csv});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_EQ(parse_stdout(o).at("error"), "insufficient_history");
}

TEST(Cli, CorruptArtifactIsARuntimeError) {
  const auto& w = workspace();
  st::TempDir dir;
  const auto broken = (dir / "broken.json").string();
  st::write_file(broken, st::read_file(w.gbdt).substr(0, 200));
  const auto o = run({"evaluate", "--artifact", broken, "--prepared", w.prepared});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_EQ(parse_stdout(o).at("error"), "checksum_mismatch");
}

TEST(Cli, ServeAnswersAndStopsOnSigterm) {
  const auto& w = workspace();
  st::TempDir models, io;
  std::filesystem::copy_file(w.gbdt, models / "gbdt.json");
  const pid_t pid = spawn({"serve", "--models-dir", models.path().string(), "--prepared", w.prepared, "--port", "0"}, io);

  json listening;
  for (int i = 0; i < 200 && listening.is_null(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
    const auto text = st::read_file(io / "stdout.txt");
    if (const auto nl = text.find('\n'); nl != std::string::npos) listening = json::parse(text.substr(0, nl));
  }
  ASSERT_FALSE(listening.is_null()) << st::read_file(io / "stderr.txt");
  EXPECT_EQ(listening.at("status"), "listening");
  const int port = listening.at("port").get<int>();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  auto forecast = client.Get("/v1/forecast?district=TUZLA");
  ASSERT_TRUE(forecast);
  EXPECT_EQ(json::parse(forecast->body).at("points").size(), 12u);

  // A second server on the same port must fail.
  const auto clash = run({"serve", "--models-dir", models.path().string(), "--port", std::to_string(port)});
  EXPECT_EQ(clash.exit_code, 1);

  kill(pid, SIGTERM);
  EXPECT_EQ(wait_exit(pid), 0);
}

TEST(Cli, ServeRefusesCorruptModelsDir) {
  const auto& w = workspace();
  st::TempDir models;
  st::write_file(models / "bad.json", st::read_file(w.gbdt).substr(0, 100));
  const auto o = run({"serve", "--models-dir", models.path().string(), "--port", "0"});
  EXPECT_EQ(o.exit_code, 1);
}

TEST(Cli, ServePortFromEnvironmentYieldsToFlag) {
  httplib::Server blocker;
  const int taken = blocker.bind_to_any_port("127.0.0.1");
  ASSERT_GT(taken, 0);
  st::TempDir models, io;
  const std::string env = "SMARTJOURNEY_PORT=" + std::to_string(taken);
  const auto o = run({"serve", "--models-dir", models.path().string()}, {env});
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_EQ(parse_stdout(o).at("error"), "io_error");

  const pid_t pid = spawn({"serve", "--models-dir", models.path().string(), "--port", "0"}, io, {env});
  json listening;
  for (int i = 0; i < 200 && listening.is_null(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
    const auto text = st::read_file(io / "stdout.txt");
    if (const auto nl = text.find('\n'); nl != std::string::npos) listening = json::parse(text.substr(0, nl));
  }
  ASSERT_FALSE(listening.is_null());
  EXPECT_NE(listening.at("port").get<int>(), taken);
  kill(pid, SIGTERM);
  EXPECT_EQ(wait_exit(pid), 0);
}
