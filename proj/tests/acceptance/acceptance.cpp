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

// Acceptance run over the reference scenario. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.
//
//   acceptance [--jobs N] [--runs N]

#include "chanlearn/baselines.hpp"
#include "chanlearn/featpipe.hpp"
#include "chanlearn/gscm.hpp"
#include "chanlearn/harness.hpp"
#include "chanlearn/neuralnet.hpp"
#include "chanlearn/optim.hpp"
#include "chanlearn/scenario.hpp"

#include "test_support.hpp"

#include <Eigen/Cholesky>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace {

using namespace chanlearn;

// Tolerances.
constexpr double kRsTarget = 0.20;
constexpr double kRsTol = 0.02;
constexpr double kNnTarget = 0.73;
constexpr double kNnTol = 0.10;
constexpr double kKnnTarget = 0.50;
constexpr double kKnnTol = 0.10;
constexpr double kKnnSpread = 0.08;
constexpr double kGapLo = 0.0;
constexpr double kGapHi = 0.10;
constexpr double kAntennaSlack = 0.02;
constexpr double kCoincident = 1e-9;
constexpr double kGradRel = 1e-6;
constexpr double kParsevalRel = 1e-9;
constexpr double kCgSolve = 1e-8;
constexpr double kCgTrace = 1e-12;
constexpr double kRicianRel = 1e-9;

int failures = 0;

void report(int id, bool ok, std::string_view title, const std::string &detail)
{
    fmt::print("[{}] C{} {}: {}\n", ok ? "PASS" : "FAIL", id, title, detail);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double row_mean(const harness::ExperimentResult &r, const std::string &name) { return r.row(name).mean_acc; }

// ---------------------------------------------------------------------------
// C7 property checks.

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

Check gradient_check()
{
    Rng rng(101);
    double worst = 0.0;
    const std::vector<nn::NetShape> shapes{{{4, 3, 2}}, {{6, 5, 4}}, {{10, 8, 5}}};
    for (const auto &shape : shapes) {
        for (int trial = 0; trial < 3; ++trial) {
            nn::NetParams p{shape, Eigen::VectorXd(static_cast<Eigen::Index>(shape.n_params()))};
            for (auto &v : p.theta)
                v = rng.normal() * 0.8;
            const std::size_t m = 20;
            std::vector<std::vector<double>> xs(m);
            std::vector<int> labels;
            for (auto &x : xs) {
                for (int i = 0; i < shape.input_size(); ++i)
                    x.push_back(rng.uniform(-1.0, 1.0));
                labels.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(shape.output_size()))));
            }
            const auto batch = nn::make_batch(xs, labels, shape.output_size());
            const nn::Regularization reg{trial == 0 ? 0.0 : 1e-2, trial == 2};
            const auto g = nn::gradient(p, batch, reg);
            Eigen::VectorXd fd(g.size());
            auto q = p;
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                q.theta[i] = p.theta[i] + 1e-6;
                const double up = nn::cost(q, batch, reg);
                q.theta[i] = p.theta[i] - 1e-6;
                const double down = nn::cost(q, batch, reg);
                q.theta[i] = p.theta[i];
                fd[i] = (up - down) / 2e-6;
            }
            worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), fd.norm()));
        }
    }
    return {"backprop", worst < kGradRel, fmt::format("{:.2e}", worst)};
}

Check parseval_check()
{
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = testing::random_channel(rng, 1 + rng.index(200));
        double lhs = 0.0;
        for (double v : features::angular_magnitude(h))
            lhs += v * v;
        worst = std::max(worst, std::abs(lhs / (static_cast<double>(h.size()) * power(h)) - 1.0));
    }
    return {"parseval", worst < kParsevalRel, fmt::format("{:.2e}", worst)};
}

Check lloyd_check()
{
    Rng rng(103);
    int violations = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> samples(2000);
        for (auto &v : samples)
            v = std::log10(std::abs(rng.normal()) + 1e-9);
        std::vector<double> trace;
        features::lloyd_train(samples, 16, 100, 0.0, &trace);
        for (std::size_t i = 1; i < trace.size(); ++i)
            violations += trace[i] > trace[i - 1];
    }
    return {"lloyd", violations == 0, fmt::format("{} rises", violations)};
}

Check cg_check(bool &trace_ok, double &trace_worst)
{
    Rng rng(104);
    double worst = 0.0;
    int max_iters = 0;
    trace_ok = true;
    trace_worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd m(6, 6);
        for (int i = 0; i < 36; ++i)
            m.data()[i] = rng.normal();
        const Eigen::MatrixXd a = m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(6, 6);
        Eigen::VectorXd b(6);
        for (auto &v : b)
            v = rng.normal();
        const auto f = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
            g = a * x - b;
            return 0.5 * x.dot(a * x) - b.dot(x);
        };
        optim::OptimOptions opts;
        opts.grad_tol = 1e-12;
        opts.cost_tol = 0.0;
        const auto r = optim::minimize(f, Eigen::VectorXd::Zero(6), opts);
        worst = std::max(worst, (r.theta - a.ldlt().solve(b)).norm());
        max_iters = std::max(max_iters, r.report.iterations);
        for (std::size_t i = 1; i < r.report.cost_trace.size(); ++i)
            trace_worst = std::max(trace_worst, r.report.cost_trace[i] - r.report.cost_trace[i - 1]);
    }
    trace_ok = trace_worst <= kCgTrace;
    return {"cg-solve", worst < kCgSolve && max_iters <= 20,
            fmt::format("{:.1e} in <= {} iters", worst, max_iters)};
}

Check cg_trace_on_network(double prior_worst)
{
    // Cost traces from real training runs.
    const auto s = testing::tiny_scenario();
    auto sp = harness::split(harness::generate_dataset(s, 105).samples, 0.5, 106);
    const auto model = harness::train_channel_net(sp.train, s, 107);
    double worst = prior_worst;
    const auto &t = model.net.report.cost_trace;
    for (std::size_t i = 1; i < t.size(); ++i)
        worst = std::max(worst, t[i] - t[i - 1]);
    return {"cg-trace", worst <= kCgTrace, fmt::format("max rise {:.1e}", worst)};
}

Check rician_check()
{
    double worst = 0.0;
    for (int g_id = 0; g_id < 5; ++g_id) {
        const auto g = testing::reference_geometry(20, 100, 200 + static_cast<std::uint64_t>(g_id));
        const gscm::ChannelModel model(g, {});
        Rng rng(108 + static_cast<std::uint64_t>(g_id));
        for (int trial = 0; trial < 200; ++trial) {
            const auto c = model.array_components(gscm::sample_coverage_point(rng, g));
            worst = std::max(worst, std::abs(power(c.los) / power(c.scattered) / 10.0 - 1.0));
        }
    }
    return {"rician", worst < kRicianRel, fmt::format("{:.1e}", worst)};
}

Check knn_check()
{
    const auto g = testing::reference_geometry(20, 100, 109);
    const gscm::ChannelModel model(g, {});
    Rng rng(110);
    std::vector<std::vector<double>> pts;
    std::vector<int> labels;
    for (int i = 0; i < 1000; ++i) {
        const auto u = gscm::sample_coverage_point(rng, g);
        pts.push_back(baselines::stack_real_imag(model.to_array(u)));
        labels.push_back(static_cast<int>(gscm::best_cell_label(model.to_small_cells(u))));
    }
    const baselines::KnnModel knn(pts, labels, 1);
    const int ks[] = {1, 5, 10, 25};
    int mismatches = 0;
    for (int q_id = 0; q_id < 500; ++q_id) {
        const auto q = baselines::stack_real_imag(model.to_array(gscm::sample_coverage_point(rng, g)));
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double s = 0.0;
            for (std::size_t c = 0; c < q.size(); ++c)
                s += (pts[i][c] - q[c]) * (pts[i][c] - q[c]);
            d.emplace_back(s, i);
        }
        std::sort(d.begin(), d.end());
        const auto got = knn.predict_many(q, ks);
        for (std::size_t j = 0; j < std::size(ks); ++j) {
            std::map<int, int> votes;
            for (int i = 0; i < ks[j]; ++i)
                ++votes[labels[d[static_cast<std::size_t>(i)].second]];
            int best = -1, best_votes = -1;
            for (const auto &[label, v] : votes)
                if (v > best_votes) {
                    best = label;
                    best_votes = v;
                }
            mismatches += got[j] != best;
        }
    }
    return {"knn", mismatches == 0, fmt::format("{} mismatches", mismatches)};
}

std::string pipeline_bytes(const Scenario &s)
{
    std::ostringstream out;
    const auto r = harness::run_experiment(s);
    harness::write_results_csv(out, r.runs);
    harness::write_aggregate_csv(out, r.aggregate);
    harness::write_distance_csv(out, harness::distance_study(s, s.distance_pairs));
    return out.str();
}

Check determinism_check(int jobs)
{
    auto s = testing::tiny_scenario();
    s.n_runs = 3;
    const auto a = pipeline_bytes(s);
    const auto b = pipeline_bytes(s);
    s.jobs = std::max(2, jobs);
    const auto c = pipeline_bytes(s);
    return {"determinism", a == b && a == c, fmt::format("{} bytes", a.size())};
}

// ---------------------------------------------------------------------------

int parse_flag(int argc, char **argv, std::string_view flag, int fallback)
{
    for (int i = 1; i + 1 < argc; ++i)
        if (argv[i] == flag) {
            int v = fallback;
            const std::string_view text = argv[i + 1];
            std::from_chars(text.data(), text.data() + text.size(), v);
            return v;
        }
    return fallback;
}

} // namespace

int main(int argc, char **argv)
{
    const auto start = std::chrono::steady_clock::now();
    const int jobs = parse_flag(argc, argv, "--jobs", static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));

    Scenario reference = load_scenario(std::string(CHANLEARN_SCENARIO_DIR) + "/reference.scenario");
    reference.jobs = jobs;
    reference.n_runs = parse_flag(argc, argv, "--runs", reference.n_runs);
    fmt::print("reference scenario: {} antennas, {} scatterers, {} cells, {} users, {} runs, jobs={}\n",
               reference.n_antennas, reference.n_scatterers, reference.n_small_cells, reference.n_users, reference.n_runs, jobs);

    const auto base = harness::run_experiment(reference);
    for (const auto &row : base.aggregate)
        fmt::print("  {:<10} mean {:.4f} std {:.4f}\n", row.algorithm, row.mean_acc, row.std_acc);

    Scenario many_scatterers = reference;
    many_scatterers.n_scatterers = 100;
    const auto dense = harness::run_experiment(many_scatterers);
    Scenario fewer_antennas = reference;
    fewer_antennas.n_antennas = 50;
    const auto narrow = harness::run_experiment(fewer_antennas);

    const double rs = row_mean(base, harness::kRandomSelection);
    const double nn_cr = row_mean(base, harness::kChannelNet);
    const double nn_lo = row_mean(base, harness::kLocationNet);
    std::vector<double> knn;
    for (int k : reference.knn_k_list)
        knn.push_back(row_mean(base, harness::knn_name(k)));
    const double knn_best = *std::max_element(knn.begin(), knn.end());
    const double knn_worst = *std::min_element(knn.begin(), knn.end());
    double knn_mean = 0.0;
    for (double v : knn)
        knn_mean += v / static_cast<double>(knn.size());

    report(1, std::abs(rs - kRsTarget) <= kRsTol, "random selection",
           fmt::format("mean {:.4f}, target {:.2f} +- {:.2f}", rs, kRsTarget, kRsTol));

    const bool in_band = std::abs(nn_cr - kNnTarget) <= kNnTol;
    const bool ordered = nn_lo >= nn_cr && nn_cr > knn_best && knn_best > rs;
    report(2, in_band && ordered, "channel network headline",
           fmt::format("NN-CR {:.4f} (band {:.2f} +- {:.2f}: {}); ordering NN-LO {:.4f} >= NN-CR > best KNN {:.4f} > RS "
                       "{:.4f}: {}",
                       nn_cr, kNnTarget, kNnTol, in_band ? "in" : "out", nn_lo, knn_best, rs,
                       ordered ? "holds" : "violated"));

    const double spread = knn_best - knn_worst;
    report(3, std::abs(knn_mean - kKnnTarget) <= kKnnTol && spread <= kKnnSpread, "KNN band",
           fmt::format("mean over k {:.4f} (target {:.2f} +- {:.2f}), per-k [{:.4f}], spread {:.4f} (max {:.2f})",
                       knn_mean, kKnnTarget, kKnnTol, fmt::join(knn, ", "), spread, kKnnSpread));

    const double gap = nn_lo - nn_cr;
    report(4, gap >= kGapLo && gap <= kGapHi, "location network gap",
           fmt::format("NN-LO - NN-CR = {:.4f}, allowed [{:.2f}, {:.2f}]", gap, kGapLo, kGapHi));

    const double dense_cr = row_mean(dense, harness::kChannelNet);
    const double narrow_cr = row_mean(narrow, harness::kChannelNet);
    const bool scatter_trend = dense_cr < nn_cr;
    const bool antenna_trend = nn_cr >= narrow_cr - kAntennaSlack;
    report(5, scatter_trend && antenna_trend, "sweep trends",
           fmt::format("NN-CR 100 scatterers {:.4f} vs 20 scatterers {:.4f} ({}); 50 antennas {:.4f} vs 100 antennas "
                       "{:.4f} ({})",
                       dense_cr, nn_cr, scatter_trend ? "decreasing" : "not decreasing", narrow_cr, nn_cr,
                       antenna_trend ? "non-decreasing within 0.02" : "decreasing"));

    const auto pairs = harness::distance_study(reference, reference.distance_pairs);
    const auto minima = harness::decile_minima(pairs, 10);
    bool monotone = true;
    for (std::size_t b = 1; b < minima.size(); ++b)
        monotone = monotone && minima[b] >= minima[b - 1];
    const auto geometry = harness::build_geometry(reference, harness::run_seed(reference.master_seed, 0));
    const gscm::ChannelModel model(geometry, harness::gscm_params(reference));
    Rng rng(111);
    double coincident = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto u = gscm::sample_coverage_point(rng, geometry);
        coincident = std::max(coincident, harness::channel_distance(model.to_array(u), model.to_array(u)));
    }
    const double ratio = minima.front() / minima.back();
    report(6, monotone && coincident < kCoincident, "channel distance vs. geography",
           fmt::format("decile minima [{:.3f}] ({}); first/last {:.3f}; coincident max {:.1e}", fmt::join(minima, ", "),
                       monotone ? "non-decreasing" : "not monotone", ratio, coincident));

    bool trace_ok = true;
    double trace_worst = 0.0;
    std::vector<Check> checks;
    checks.push_back(gradient_check());
    checks.push_back(parseval_check());
    checks.push_back(lloyd_check());
    checks.push_back(cg_check(trace_ok, trace_worst));
    checks.push_back(cg_trace_on_network(trace_worst));
    checks.push_back(rician_check());
    checks.push_back(knn_check());
    checks.push_back(determinism_check(jobs));
    bool all = true;
    std::string detail;
    for (const auto &c : checks) {
        all = all && c.ok;
        detail += fmt::format("{}{} {} ({})", detail.empty() ? "" : "; ", c.name, c.ok ? "ok" : "FAILED", c.detail);
    }
    report(7, all, "property suites", detail);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} of 7 criteria passed in {:.0f} s\n", 7 - failures, secs);
    return failures == 0 ? 0 : 1;
}
