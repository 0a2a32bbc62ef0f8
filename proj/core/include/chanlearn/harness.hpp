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

#ifndef CHANLEARN_HARNESS_HPP
#define CHANLEARN_HARNESS_HPP

#include "chanlearn/featpipe.hpp"
#include "chanlearn/gscm.hpp"
#include "chanlearn/neuralnet.hpp"
#include "chanlearn/optim.hpp"
#include "chanlearn/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chanlearn::harness {

inline constexpr const char *kRandomSelection = "RS";
inline constexpr const char *kChannelNet = "NN-CR";
inline constexpr const char *kLocationNet = "NN-LO";
std::string knn_name(int k);

// Users within this distance of an antenna, scatterer or small cell are redrawn.
inline constexpr double kUserClearance = 0.1;

struct LabeledSample {
    Point2 location;
    ChannelVector h_o;
    ChannelVector h_u;
    int label = 0;
    features::FeatureVector feature;   // empty until a codebook is applied
};

struct Dataset {
    gscm::Geometry geometry;
    std::vector<LabeledSample> samples;
};

struct Split {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
};

struct RunResult {
    int run_id = 0;
    std::string algorithm;
    int n_antennas = 0;
    int n_scatterers = 0;
    double test_accuracy = 0.0;
    std::size_t n_correct = 0;
    std::size_t n_test = 0;
    std::string note;   // e.g. the optimizer stop reason when training failed
};

struct AggregateRow {
    std::string algorithm;
    int n_antennas = 0;
    int n_scatterers = 0;
    double mean_acc = 0.0;
    double std_acc = 0.0;   // sample standard deviation, 0 for a single run
    int n_runs = 0;
};

struct ExperimentResult {
    std::vector<RunResult> runs;
    std::vector<AggregateRow> aggregate;

    // Throws std::out_of_range for an unknown algorithm.
    const AggregateRow &row(const std::string &algorithm) const;
};

struct SweepResult {
    std::vector<int> antennas;
    std::vector<int> scatterers;
    std::vector<ExperimentResult> cells;   // row-major, antennas x scatterers

    const ExperimentResult &at(std::size_t antenna_idx, std::size_t scatterer_idx) const
    {
        return cells.at(antenna_idx * scatterers.size() + scatterer_idx);
    }
};

struct DistancePair {
    int pair_id = 0;
    double geo_dist_m = 0.0;
    double channel_dist = 0.0;
};

std::uint64_t run_seed(std::uint64_t master_seed, int run_id);

gscm::GscmParams gscm_params(const Scenario &scenario);
// Fresh scatterers and reflection coefficients for one run.
gscm::Geometry build_geometry(const Scenario &scenario, std::uint64_t seed);

Dataset generate_dataset(const Scenario &scenario, std::uint64_t seed);

// Seeded shuffle; |train| = round(fraction * n), kept within [1, n - 1].
Split split(std::vector<LabeledSample> samples, double train_fraction, std::uint64_t seed);

// Pooled log angular magnitudes of the given samples.
std::vector<double> pooled_log_magnitudes(std::span<const LabeledSample> samples);
features::Codebook train_codebook(std::span<const LabeledSample> train, const Scenario &scenario);
void attach_features(std::span<LabeledSample> samples, const features::Codebook &codebook);

optim::TrainOptions train_options(const Scenario &scenario);
nn::NetShape channel_net_shape(const Scenario &scenario);

struct ChannelNetModel {
    features::Codebook codebook;
    optim::TrainResult net;
};

// Trains the codebook and the channel network on `train`, attaching features
// to the training samples.
ChannelNetModel train_channel_net(std::span<LabeledSample> train, const Scenario &scenario, std::uint64_t seed);

double accuracy(std::span<const int> predicted, std::span<const LabeledSample> samples);

std::vector<RunResult> run_once(const Scenario &scenario, int run_id);

std::vector<AggregateRow> aggregate(std::span<const RunResult> runs);

ExperimentResult run_experiment(const Scenario &scenario);

SweepResult sweep(const Scenario &scenario, std::span<const int> antennas, std::span<const int> scatterers);

// Euclidean distance between the unit-normalized responses.
double channel_distance(const ChannelVector &a, const ChannelVector &b);

// Each pair gets its own scatterer draw and two uniform users.
std::vector<DistancePair> distance_study(const Scenario &scenario, int n_pairs);

// Minimum channel distance inside each of `n_bins` equal-count groups of
// pairs ordered by geographic distance.
std::vector<double> decile_minima(std::span<const DistancePair> pairs, int n_bins = 10);

void write_results_csv(std::ostream &out, std::span<const RunResult> runs);
void write_aggregate_csv(std::ostream &out, std::span<const AggregateRow> rows);
void write_distance_csv(std::ostream &out, std::span<const DistancePair> pairs);

// Runs fn(0..n-1) on up to `jobs` threads. The first exception by index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn);

} // namespace chanlearn::harness

#endif
