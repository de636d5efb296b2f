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

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "smartjourney/gbdt.hpp"
#include "smartjourney/geo.hpp"
#include "smartjourney/lstm.hpp"
#include "smartjourney/metrics.hpp"
#include "smartjourney/transformer.hpp"

namespace sj = smartjourney;

namespace {

sj::Matrix random_window(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sj::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

template <class Network, class Architecture>
void forward(benchmark::State& state) {
  const Architecture arch;
  const Network net(arch, 1);
  const auto window = random_window(arch.window, arch.features, 2);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(net.parameters(), window));
}

template <class Network, class Architecture>
void forward_backward(benchmark::State& state) {
  const Architecture arch;
  const Network net(arch, 1);
  const auto window = random_window(arch.window, arch.features, 2);
  sj::ParameterStore grads = net.parameters().zeros_like();
  for (auto _ : state) {
    grads.set_zero();
    benchmark::DoNotOptimize(net.sample_gradient(net.parameters(), window, 0.5, grads));
  }
}

void BM_LstmForward(benchmark::State& s) { forward<sj::LstmNetwork, sj::LstmArchitecture>(s); }
void BM_LstmForwardBackward(benchmark::State& s) { forward_backward<sj::LstmNetwork, sj::LstmArchitecture>(s); }
void BM_TransformerForward(benchmark::State& s) { forward<sj::TransformerNetwork, sj::TransformerArchitecture>(s); }
void BM_TransformerForwardBackward(benchmark::State& s) {
  forward_backward<sj::TransformerNetwork, sj::TransformerArchitecture>(s);
}

void BM_BuildTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  sj::FeatureMatrix x(n, 150);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 150; ++c) x(r, c) = normal(rng);
  }
  std::vector<double> g(n), h(n, 1.0);
  for (auto& v : g) v = normal(rng);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  const sj::BoostingConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(sj::build_tree(x, rows, g, h, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_AssignDistrict(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lat(40.8, 41.2), lon(28.4, 29.5);
  std::vector<sj::LatLon> points(1024);
  for (auto& p : points) p = {lat(rng), lon(rng)};
  const auto& registry = sj::default_districts();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sj::nearest_district(points[i++ & 1023], registry));
}

void BM_ComputeMetrics(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1.0, 1000.0);
  std::vector<double> actual(n), predicted(n);
  for (std::size_t k = 0; k < n; ++k) actual[k] = u(rng), predicted[k] = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sj::compute_metrics(actual, predicted));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_LstmForward);
BENCHMARK(BM_LstmForwardBackward);
BENCHMARK(BM_TransformerForward);
BENCHMARK(BM_TransformerForwardBackward);
BENCHMARK(BM_BuildTree)->Arg(512)->Arg(2048);
BENCHMARK(BM_AssignDistrict);
BENCHMARK(BM_ComputeMetrics)->Arg(1024)->Arg(65536);
BENCHMARK_MAIN();
