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

#include "chanlearn/harness.hpp"

#include "chanlearn/baselines.hpp"
#include "chanlearn/random.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace chanlearn::harness {

std::string knn_name(int k) { return fmt::format("KNN(k={})", k); }

const AggregateRow &ExperimentResult::row(const std::string &algorithm) const
{
    for (const auto &r : aggregate)
        if (r.algorithm == algorithm)
            return r;
    throw std::out_of_range(fmt::format("no aggregate row for '{}'", algorithm));
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_id)
{
    return derive_seed(master_seed, static_cast<std::uint64_t>(run_id));
}

gscm::GscmParams gscm_params(const Scenario &scenario)
{
    return {scenario.rician_k_db, scenario.pathloss_exponent, scenario.reference_distance_m};
}

gscm::Geometry build_geometry(const Scenario &scenario, std::uint64_t seed)
{
    gscm::Geometry g;
    g.n_antennas = scenario.n_antennas;
    g.wavelength = scenario.wavelength_m;
    g.antenna_spacing = scenario.wavelength_m / 2.0;
    g.coverage_radius = scenario.radius_m;
    g.small_cells = scenario.cell_positions();
    g.scatterers = gscm::place_scatterers(derive_seed(seed, Stream::scatterers), scenario.n_scatterers, g);
    g.reflection = gscm::draw_reflection_coefficients(derive_seed(seed, Stream::reflection), scenario.n_scatterers);
    return g;
}

namespace {

Point2 draw_user(Rng &rng, const gscm::ChannelModel &model)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Point2 p = gscm::sample_coverage_point(rng, model.geometry());
        if (!model.is_degenerate(p, kUserClearance))
            return p;
    }
    throw std::runtime_error("could not place a user away from antennas, scatterers and small cells");
}

double mean(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

Dataset generate_dataset(const Scenario &scenario, std::uint64_t seed)
{
    scenario.validate();
    const gscm::ChannelModel model(build_geometry(scenario, seed), gscm_params(scenario));
    Rng rng(derive_seed(seed, Stream::users));

    Dataset ds{model.geometry(), {}};
    ds.samples.reserve(static_cast<std::size_t>(scenario.n_users));
    for (int u = 0; u < scenario.n_users; ++u) {
        LabeledSample s;
        s.location = draw_user(rng, model);
        s.h_o = model.to_array(s.location);
        s.h_u = model.to_small_cells(s.location);
        s.label = static_cast<int>(gscm::best_cell_label(s.h_u));
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

Split split(std::vector<LabeledSample> samples, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");
    if (samples.size() < 2)
        throw std::invalid_argument("split: need at least two samples");
    const auto n = static_cast<long>(samples.size());
    const auto n_train = static_cast<std::size_t>(
        std::clamp(std::lround(train_fraction * static_cast<double>(n)), 1L, n - 1));

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    Split out;
    out.train.reserve(n_train);
    out.test.reserve(samples.size() - n_train);
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? out.train : out.test).push_back(std::move(samples[order[i]]));
    return out;
}

std::vector<double> pooled_log_magnitudes(std::span<const LabeledSample> samples)
{
    std::vector<double> pooled;
    for (const auto &s : samples) {
        const auto logs = features::log_compress(features::angular_magnitude(s.h_o));
        pooled.insert(pooled.end(), logs.begin(), logs.end());
    }
    return pooled;
}

features::Codebook train_codebook(std::span<const LabeledSample> train, const Scenario &scenario)
{
    return features::lloyd_train(pooled_log_magnitudes(train), scenario.quant_levels, scenario.lloyd_max_iters,
                                 scenario.lloyd_tol);
}

void attach_features(std::span<LabeledSample> samples, const features::Codebook &codebook)
{
    for (auto &s : samples)
        s.feature = features::make_feature(s.h_o, codebook);
}

optim::TrainOptions train_options(const Scenario &scenario)
{
    optim::TrainOptions opts;
    opts.reg = {scenario.lambda_reg, scenario.reg_include_bias};
    opts.optim.max_iters = scenario.max_iters;
    opts.optim.grad_tol = scenario.grad_tol;
    opts.optim.cost_tol = scenario.cost_tol;
    return opts;
}

nn::NetShape channel_net_shape(const Scenario &scenario)
{
    return {{scenario.n_antennas, scenario.hidden_units, scenario.n_small_cells}};
}

ChannelNetModel train_channel_net(std::span<LabeledSample> train, const Scenario &scenario, std::uint64_t seed)
{
    ChannelNetModel model{train_codebook(train, scenario), {}};
    attach_features(train, model.codebook);
    std::vector<std::vector<double>> inputs;
    std::vector<int> labels;
    inputs.reserve(train.size());
    labels.reserve(train.size());
    for (const auto &s : train) {
        inputs.push_back(s.feature.values);
        labels.push_back(s.label);
    }
    model.net = optim::train(nn::make_batch(inputs, labels, scenario.n_small_cells), channel_net_shape(scenario),
                             train_options(scenario), seed);
    return model;
}

double accuracy(std::span<const int> predicted, std::span<const LabeledSample> samples)
{
    if (predicted.size() != samples.size() || samples.empty())
        throw std::invalid_argument("accuracy: prediction count does not match sample count");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        correct += predicted[i] == samples[i].label ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::vector<RunResult> run_once(const Scenario &scenario, int run_id)
{
    const std::uint64_t seed = run_seed(scenario.master_seed, run_id);
    Dataset ds = generate_dataset(scenario, seed);
    Split parts = split(std::move(ds.samples), scenario.train_fraction, derive_seed(seed, Stream::split));
    const std::size_t n_test = parts.test.size();

    std::vector<RunResult> results;
    auto record = [&](std::string name, const std::vector<int> &predicted, std::string note = {}) {
        RunResult r;
        r.run_id = run_id;
        r.algorithm = std::move(name);
        r.n_antennas = scenario.n_antennas;
        r.n_scatterers = scenario.n_scatterers;
        r.n_test = n_test;
        for (std::size_t i = 0; i < n_test; ++i)
            r.n_correct += predicted[i] == parts.test[i].label ? 1 : 0;
        r.test_accuracy = static_cast<double>(r.n_correct) / static_cast<double>(n_test);
        r.note = std::move(note);
        results.push_back(std::move(r));
    };
    auto training_note = [](const optim::OptimReport &report) {
        return report.stop_reason == optim::StopReason::line_search_fail
                   ? std::string(optim::to_string(report.stop_reason))
                   : std::string{};
    };

    std::vector<int> predicted(n_test);

    // RS
    baselines::RandomSelector rs(derive_seed(seed, Stream::random_selection));
    for (auto &p : predicted)
        p = rs.next(scenario.n_small_cells);
    record(kRandomSelection, predicted);

    // KNN over raw array responses, all k from one distance pass per query.
    {
        std::vector<std::vector<double>> points;
        std::vector<int> labels;
        points.reserve(parts.train.size());
        for (const auto &s : parts.train) {
            points.push_back(baselines::stack_real_imag(s.h_o));
            labels.push_back(s.label);
        }
        const baselines::KnnModel knn(std::move(points), std::move(labels), scenario.knn_k_list.front());
        std::vector<std::vector<int>> per_k(scenario.knn_k_list.size(), std::vector<int>(n_test));
        for (std::size_t i = 0; i < n_test; ++i) {
            const auto votes = knn.predict_many(baselines::stack_real_imag(parts.test[i].h_o), scenario.knn_k_list);
            for (std::size_t j = 0; j < votes.size(); ++j)
                per_k[j][i] = votes[j];
        }
        for (std::size_t j = 0; j < per_k.size(); ++j)
            record(knn_name(scenario.knn_k_list[j]), per_k[j]);
    }

    // NN-CR: features from h_o only, codebook from the training split only.
    {
        const ChannelNetModel model = train_channel_net(parts.train, scenario, derive_seed(seed, Stream::nn_channel));
        attach_features(parts.test, model.codebook);
        for (std::size_t i = 0; i < n_test; ++i)
            predicted[i] = nn::predict(model.net.params, parts.test[i].feature.values);
        record(kChannelNet, predicted, training_note(model.net.report));
    }

    // NN-LO
    {
        std::vector<Point2> locations;
        std::vector<int> labels;
        for (const auto &s : parts.train) {
            locations.push_back(s.location);
            labels.push_back(s.label);
        }
        const auto net = baselines::nnlo_train(locations, labels, ds.geometry, scenario.hidden_units,
                                               train_options(scenario), derive_seed(seed, Stream::nn_location));
        for (std::size_t i = 0; i < n_test; ++i)
            predicted[i] = baselines::nnlo_predict(net.params, parts.test[i].location, ds.geometry);
        record(kLocationNet, predicted, training_note(net.report));
    }
    return results;
}

std::vector<AggregateRow> aggregate(std::span<const RunResult> runs)
{
    std::vector<AggregateRow> rows;
    std::vector<std::vector<double>> values;
    for (const auto &r : runs) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow &a) {
            return a.algorithm == r.algorithm && a.n_antennas == r.n_antennas && a.n_scatterers == r.n_scatterers;
        });
        if (it == rows.end()) {
            rows.push_back({r.algorithm, r.n_antennas, r.n_scatterers, 0.0, 0.0, 0});
            values.emplace_back();
            it = rows.end() - 1;
        }
        values[static_cast<std::size_t>(it - rows.begin())].push_back(r.test_accuracy);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &v = values[i];
        rows[i].n_runs = static_cast<int>(v.size());
        rows[i].mean_acc = mean(v);
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v)
                ss += (x - rows[i].mean_acc) * (x - rows[i].mean_acc);
            rows[i].std_acc = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
    }
    return rows;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn)
{
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

ExperimentResult run_experiment(const Scenario &scenario)
{
    scenario.validate();
    std::vector<std::vector<RunResult>> per_run(static_cast<std::size_t>(scenario.n_runs));
    parallel_for(per_run.size(), scenario.jobs,
                 [&](std::size_t i) { per_run[i] = run_once(scenario, static_cast<int>(i)); });

    ExperimentResult out;
    for (auto &r : per_run)
        std::move(r.begin(), r.end(), std::back_inserter(out.runs));
    out.aggregate = aggregate(out.runs);
    return out;
}

SweepResult sweep(const Scenario &scenario, std::span<const int> antennas, std::span<const int> scatterers)
{
    SweepResult out{{antennas.begin(), antennas.end()}, {scatterers.begin(), scatterers.end()}, {}};
    for (int a : antennas)
        for (int s : scatterers) {
            Scenario cfg = scenario;
            cfg.n_antennas = a;
            cfg.n_scatterers = s;
            out.cells.push_back(run_experiment(cfg));
        }
    return out;
}

double channel_distance(const ChannelVector &a, const ChannelVector &b)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("channel_distance: channels differ in length");
    const double na = std::sqrt(power(a));
    const double nb = std::sqrt(power(b));
    if (!(na > 0.0) || !(nb > 0.0))
        throw std::invalid_argument("channel_distance: zero channel");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += std::norm(a[k] / na - b[k] / nb);
    return std::sqrt(acc);
}

std::vector<DistancePair> distance_study(const Scenario &scenario, int n_pairs)
{
    if (n_pairs < 1)
        throw std::invalid_argument("distance_study: n_pairs must be positive");
    scenario.validate();
    const std::uint64_t base = derive_seed(scenario.master_seed, Stream::distance_study);
    std::vector<DistancePair> out(static_cast<std::size_t>(n_pairs));
    parallel_for(out.size(), scenario.jobs, [&](std::size_t p) {
        const std::uint64_t seed = derive_seed(base, p);
        const gscm::ChannelModel model(build_geometry(scenario, seed), gscm_params(scenario));
        Rng rng(derive_seed(seed, Stream::users));
        const Point2 u1 = draw_user(rng, model);
        const Point2 u2 = draw_user(rng, model);
        out[p] = {static_cast<int>(p), distance(u1, u2), channel_distance(model.to_array(u1), model.to_array(u2))};
    });
    return out;
}

std::vector<double> decile_minima(std::span<const DistancePair> pairs, int n_bins)
{
    if (n_bins < 1 || pairs.size() < static_cast<std::size_t>(n_bins))
        throw std::invalid_argument("decile_minima: need at least one pair per bin");
    std::vector<DistancePair> sorted(pairs.begin(), pairs.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const DistancePair &a, const DistancePair &b) { return a.geo_dist_m < b.geo_dist_m; });
    std::vector<double> minima;
    const std::size_t n = sorted.size();
    for (int b = 0; b < n_bins; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(n_bins);
        const std::size_t hi = n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(n_bins);
        double m = sorted[lo].channel_dist;
        for (std::size_t i = lo; i < hi; ++i)
            m = std::min(m, sorted[i].channel_dist);
        minima.push_back(m);
    }
    return minima;
}

void write_results_csv(std::ostream &out, std::span<const RunResult> runs)
{
    out << "run_id,algorithm,n_antennas,n_scatterers,accuracy\n";
    for (const auto &r : runs)
        fmt::print(out, "{},{},{},{},{:.6f}\n", r.run_id, r.algorithm, r.n_antennas, r.n_scatterers, r.test_accuracy);
}

void write_aggregate_csv(std::ostream &out, std::span<const AggregateRow> rows)
{
    out << "algorithm,n_antennas,n_scatterers,mean_acc,std_acc,n_runs\n";
    for (const auto &r : rows)
        fmt::print(out, "{},{},{},{:.6f},{:.6f},{}\n", r.algorithm, r.n_antennas, r.n_scatterers, r.mean_acc,
                   r.std_acc, r.n_runs);
}

void write_distance_csv(std::ostream &out, std::span<const DistancePair> pairs)
{
    out << "pair_id,geo_dist_m,channel_dist\n";
    for (const auto &p : pairs)
        fmt::print(out, "{},{:.6f},{:.9f}\n", p.pair_id, p.geo_dist_m, p.channel_dist);
}

} // namespace chanlearn::harness
