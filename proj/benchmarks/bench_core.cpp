// SPDX-License-Identifier: Apache-2.0
//
// chanlearn: channel learning simulation suite
// Copyright (C) 2026 The chanlearn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "chanlearn/baselines.hpp"
#include "chanlearn/featpipe.hpp"
#include "chanlearn/gscm.hpp"
#include "chanlearn/harness.hpp"
#include "chanlearn/neuralnet.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace chanlearn;

Scenario scenario_with(int antennas, int scatterers)
{
    Scenario s;
    s.n_antennas = antennas;
    s.n_scatterers = scatterers;
    return s;
}

void BM_ArrayChannel(benchmark::State &state)
{
    const auto s = scenario_with(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto geometry = harness::build_geometry(s, 1);
    const gscm::ChannelModel model(geometry, harness::gscm_params(s));
    Rng rng(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(model.to_array(gscm::sample_coverage_point(rng, geometry)));
}
BENCHMARK(BM_ArrayChannel)->Args({100, 20})->Args({100, 100})->Args({50, 20});

void BM_GenerateDataset(benchmark::State &state)
{
    const auto s = scenario_with(100, 20);
    for (auto _ : state)
        benchmark::DoNotOptimize(harness::generate_dataset(s, 3));
}
BENCHMARK(BM_GenerateDataset)->Unit(benchmark::kMillisecond);

void BM_MakeFeature(benchmark::State &state)
{
    const auto s = scenario_with(static_cast<int>(state.range(0)), 20);
    auto data = harness::generate_dataset(s, 4);
    const auto codebook = harness::train_codebook(data.samples, s);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::make_feature(data.samples[i].h_o, codebook));
        i = (i + 1) % data.samples.size();
    }
}
BENCHMARK(BM_MakeFeature)->Arg(50)->Arg(100);

void BM_LloydTrain(benchmark::State &state)
{
    const auto s = scenario_with(100, 20);
    const auto data = harness::generate_dataset(s, 5);
    const auto pooled = harness::pooled_log_magnitudes(std::span(data.samples).first(1000));
    for (auto _ : state)
        benchmark::DoNotOptimize(features::lloyd_train(pooled, s.quant_levels, s.lloyd_max_iters, s.lloyd_tol));
}
BENCHMARK(BM_LloydTrain)->Unit(benchmark::kMillisecond);

void BM_CostAndGradient(benchmark::State &state)
{
    const nn::NetShape shape{{100, static_cast<int>(state.range(0)), 5}};
    const auto params = nn::init_params(shape, 6);
    Rng rng(7);
    std::vector<std::vector<double>> xs(1000, std::vector<double>(100));
    std::vector<int> labels;
    for (auto &x : xs) {
        for (auto &v : x)
            v = rng.uniform(-1.0, 1.0);
        labels.push_back(static_cast<int>(rng.index(5)));
    }
    const auto batch = nn::make_batch(xs, labels, 5);
    Eigen::VectorXd grad;
    for (auto _ : state)
        benchmark::DoNotOptimize(nn::cost_and_gradient(shape, params.theta, batch, {1e-4, false}, grad));
}
BENCHMARK(BM_CostAndGradient)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_KnnPredict(benchmark::State &state)
{
    const auto s = scenario_with(100, 20);
    const auto data = harness::generate_dataset(s, 8);
    std::vector<std::vector<double>> pts;
    std::vector<int> labels;
    for (std::size_t i = 0; i < 1000; ++i) {
        pts.push_back(baselines::stack_real_imag(data.samples[i].h_o));
        labels.push_back(data.samples[i].label);
    }
    const baselines::KnnModel knn(std::move(pts), std::move(labels), 10);
    const auto query = baselines::stack_real_imag(data.samples[1500].h_o);
    const int ks[] = {1, 5, 10, 25};
    for (auto _ : state)
        benchmark::DoNotOptimize(knn.predict_many(query, ks));
}
BENCHMARK(BM_KnnPredict)->Unit(benchmark::kMicrosecond);

void BM_RunOnce(benchmark::State &state)
{
    const auto s = scenario_with(100, 20);
    for (auto _ : state)
        benchmark::DoNotOptimize(harness::run_once(s, 0));
}
BENCHMARK(BM_RunOnce)->Unit(benchmark::kMillisecond)->Iterations(1);

} // namespace

BENCHMARK_MAIN();
