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

#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smartjourney::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("smartjourney-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

PreparedDataset synthetic_dataset(int days, std::uint64_t seed) {
  SynthParams p;
  p.days = days;
  p.seed = seed;
  return prepare_dataset(synth_series(p), p.district);
}

TrainConfig quick_gbdt_config(int rounds) {
  TrainConfig c;
  c.model_type = ModelType::kGbdt;
  c.district = "TUZLA";
  c.seed = 7;
  c.boosting.num_rounds = rounds;
  return c;
}

TrainConfig quick_lstm_config(int epochs) {
  TrainConfig c;
  c.model_type = ModelType::kLstm;
  c.district = "TUZLA";
  c.seed = 7;
  c.schedule.max_epochs = epochs;
  c.lstm.conv_filters = 4;
  c.lstm.hidden1 = 5;
  c.lstm.hidden2 = 4;
  c.lstm.head1 = 6;
  c.lstm.head2 = 3;
  return c;
}

TrainConfig quick_transformer_config(int epochs) {
  TrainConfig c;
  c.model_type = ModelType::kTransformer;
  c.district = "TUZLA";
  c.seed = 7;
  c.schedule.max_epochs = epochs;
  c.transformer.d_model = 8;
  c.transformer.heads = 2;
  c.transformer.ffn_hidden = 6;
  c.transformer.head1 = 6;
  c.transformer.head2 = 3;
  return c;
}

Matrix random_window(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

}  // namespace smartjourney::testing
