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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "smartjourney/artifact.hpp"
#include "smartjourney/dataset.hpp"
#include "smartjourney/training.hpp"

namespace smartjourney::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Synthetic TUZLA series prepared with the default window and split.
PreparedDataset synthetic_dataset(int days = 30, std::uint64_t seed = 1);

/// Boosting config small enough for unit tests.
TrainConfig quick_gbdt_config(int rounds = 30);
/// Neural configs with narrow layers and few epochs.
TrainConfig quick_lstm_config(int epochs = 1);
TrainConfig quick_transformer_config(int epochs = 1);

/// Uniform [0, 1) window of the given shape.
Matrix random_window(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

}  // namespace smartjourney::testing
