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

#include "cli.hpp"

#include "chanlearn/featpipe.hpp"
#include "chanlearn/gscm.hpp"
#include "chanlearn/harness.hpp"
#include "chanlearn/neuralnet.hpp"
#include "chanlearn/random.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chanlearn::cli {

namespace fs = std::filesystem;

namespace {

// Tracks files written by a command and deletes them unless commit() is
// reached.
class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir))
    {
        fs::create_directories(dir_);
    }
    OutputDir(const OutputDir &) = delete;
    OutputDir &operator=(const OutputDir &) = delete;
    ~OutputDir()
    {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto &p : written_)
            fs::remove(p, ec);
    }

    template <typename Writer>
    fs::path write(const std::string &name, Writer &&writer)
    {
        const fs::path path = dir_ / name;
        written_.push_back(path);
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        writer(f);
        f.flush();
        if (!f)
            throw std::runtime_error(fmt::format("error while writing '{}'", path.string()));
        return path;
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

void print_summary(std::ostream &out, std::span<const harness::AggregateRow> rows)
{
    fmt::print(out, "{:<12} {:>9} {:>12} {:>10} {:>8} {:>6}\n", "algorithm", "antennas", "scatterers", "mean_acc",
               "std", "runs");
    for (const auto &r : rows)
        fmt::print(out, "{:<12} {:>9} {:>12} {:>10.4f} {:>8.4f} {:>6}\n", r.algorithm, r.n_antennas, r.n_scatterers,
                   r.mean_acc, r.std_acc, r.n_runs);
}

void write_samples_csv(std::ostream &out, std::span<const harness::LabeledSample> samples)
{
    if (samples.empty())
        return;
    const std::size_t n = samples.front().h_o.size();
    for (std::size_t k = 0; k < n; ++k)
        fmt::print(out, "re_{},im_{},", k, k);
    out << "label\n";
    for (const auto &s : samples) {
        for (const auto &v : s.h_o.entries)
            fmt::print(out, "{:.17g},{:.17g},", v.real(), v.imag());
        fmt::print(out, "{}\n", s.label);
    }
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

template <typename T>
T read_file(const fs::path &path, T (*reader)(std::istream &))
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
    try {
        return reader(in);
    } catch (const std::exception &e) {
        throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
    }
}

} // namespace

Scenario resolve_scenario(const CliConfig &config)
{
    if (config.scenario_path.empty())
        throw ScenarioError("--scenario is required");
    Scenario s = load_scenario(config.scenario_path, config.overrides);
    if (config.jobs) {
        if (*config.jobs < 1)
            throw ScenarioError(fmt::format("--jobs {}: must be at least 1", *config.jobs));
        s.jobs = *config.jobs;
    }
    return s;
}

int cmd_compare(const CliConfig &config, std::ostream &out)
{
    const Scenario scenario = resolve_scenario(config);
    OutputDir dir(config.output_dir);
    const auto result = harness::run_experiment(scenario);

    dir.write("scenario.txt", [&](std::ostream &f) { write_scenario(f, scenario); });
    dir.write("results.csv", [&](std::ostream &f) { harness::write_results_csv(f, result.runs); });
    dir.write("aggregate.csv", [&](std::ostream &f) { harness::write_aggregate_csv(f, result.aggregate); });
    dir.write("geometry.csv", [&](std::ostream &f) {
        gscm::write_geometry_csv(f, harness::build_geometry(scenario, harness::run_seed(scenario.master_seed, 0)));
    });
    dir.commit();

    int failed = 0;
    for (const auto &r : result.runs)
        failed += r.note.empty() ? 0 : 1;
    print_summary(out, result.aggregate);
    if (failed > 0)
        fmt::print(out, "note: {} training run(s) stopped on a line search failure; best-so-far parameters used\n",
                   failed);
    return 0;
}

int cmd_sweep(const CliConfig &config, std::ostream &out)
{
    const Scenario scenario = resolve_scenario(config);
    OutputDir dir(config.output_dir);
    const auto result = harness::sweep(scenario, scenario.sweep_antennas, scenario.sweep_scatterers);

    std::vector<harness::RunResult> runs;
    std::vector<harness::AggregateRow> rows;
    for (const auto &cell : result.cells) {
        runs.insert(runs.end(), cell.runs.begin(), cell.runs.end());
        rows.insert(rows.end(), cell.aggregate.begin(), cell.aggregate.end());
    }
    dir.write("scenario.txt", [&](std::ostream &f) { write_scenario(f, scenario); });
    dir.write("sweep_results.csv", [&](std::ostream &f) { harness::write_results_csv(f, runs); });
    dir.write("sweep_aggregate.csv", [&](std::ostream &f) { harness::write_aggregate_csv(f, rows); });
    dir.commit();

    fmt::print(out, "NN-CR mean accuracy (rows: antennas, columns: scatterers)\n{:>9}", "");
    for (int s : result.scatterers)
        fmt::print(out, " {:>8}", s);
    out << '\n';
    for (std::size_t a = 0; a < result.antennas.size(); ++a) {
        fmt::print(out, "{:>9}", result.antennas[a]);
        for (std::size_t s = 0; s < result.scatterers.size(); ++s)
            fmt::print(out, " {:>8.4f}", result.at(a, s).row(harness::kChannelNet).mean_acc);
        out << '\n';
    }
    return 0;
}

int cmd_distance(const CliConfig &config, std::ostream &out)
{
    const Scenario scenario = resolve_scenario(config);
    OutputDir dir(config.output_dir);
    const auto pairs = harness::distance_study(scenario, scenario.distance_pairs);
    dir.write("distance.csv", [&](std::ostream &f) { harness::write_distance_csv(f, pairs); });
    dir.commit();

    const int bins = std::min(10, scenario.distance_pairs);
    const auto minima = harness::decile_minima(pairs, bins);
    fmt::print(out, "{} pairs; minimum channel distance per geographic-distance bin:\n", pairs.size());
    for (std::size_t b = 0; b < minima.size(); ++b)
        fmt::print(out, "  bin {:>2}: {:.4f}\n", b, minima[b]);
    return 0;
}

int cmd_train(const CliConfig &config, std::ostream &out)
{
    const Scenario scenario = resolve_scenario(config);
    OutputDir dir(config.output_dir);

    const std::uint64_t seed = harness::run_seed(scenario.master_seed, 0);
    auto ds = harness::generate_dataset(scenario, seed);
    const gscm::Geometry geometry = ds.geometry;
    auto parts = harness::split(std::move(ds.samples), scenario.train_fraction, derive_seed(seed, Stream::split));
    const auto model = harness::train_channel_net(parts.train, scenario, derive_seed(seed, Stream::nn_channel));
    harness::attach_features(parts.test, model.codebook);

    auto acc = [&](std::span<const harness::LabeledSample> samples) {
        std::vector<int> predicted;
        for (const auto &s : samples)
            predicted.push_back(nn::predict(model.net.params, s.feature.values));
        return harness::accuracy(predicted, samples);
    };

    dir.write("model.txt", [&](std::ostream &f) { nn::write_params(f, model.net.params); });
    dir.write("codebook.csv", [&](std::ostream &f) { features::write_codebook_csv(f, model.codebook); });
    dir.write("optim_report.csv", [&](std::ostream &f) { optim::write_report_csv(f, model.net.report); });
    dir.write("train_samples.csv", [&](std::ostream &f) { write_samples_csv(f, parts.train); });
    dir.write("test_samples.csv", [&](std::ostream &f) { write_samples_csv(f, parts.test); });
    dir.write("geometry.csv", [&](std::ostream &f) { gscm::write_geometry_csv(f, geometry); });
    dir.commit();

    fmt::print(out, "iterations: {} ({})\n", model.net.report.iterations, optim::to_string(model.net.report.stop_reason));
    fmt::print(out, "train accuracy: {:.4f}\n", acc(parts.train));
    fmt::print(out, "test accuracy:  {:.4f}\n", acc(parts.test));
    return 0;
}

int cmd_predict(const CliConfig &config, std::ostream &out)
{
    const fs::path model_dir = config.model_dir.empty() ? config.output_dir : config.model_dir;
    if (config.input_csv.empty())
        throw std::runtime_error("--input is required");
    const nn::NetParams params = read_file(model_dir / "model.txt", &nn::read_params);
    const features::Codebook codebook = read_file(model_dir / "codebook.csv", &features::read_codebook_csv);

    std::ifstream in(config.input_csv);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open '{}'", config.input_csv.string()));
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error(fmt::format("{}: empty file", config.input_csv.string()));
    const auto columns = split_csv(header);
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < columns.size(); ++c)
        index[columns[c]] = c;

    std::vector<std::pair<std::size_t, std::size_t>> re_im;
    while (index.count(fmt::format("re_{}", re_im.size())) != 0) {
        const auto im = index.find(fmt::format("im_{}", re_im.size()));
        if (im == index.end())
            throw std::runtime_error(fmt::format("{}: column re_{} has no matching im_{}", config.input_csv.string(),
                                                 re_im.size(), re_im.size()));
        re_im.emplace_back(index[fmt::format("re_{}", re_im.size())], im->second);
    }
    if (static_cast<int>(re_im.size()) != params.shape.input_size())
        throw std::runtime_error(fmt::format("dimension mismatch: input has {} antennas, model expects {}",
                                             re_im.size(), params.shape.input_size()));
    const auto label_col = index.find("label");

    std::ostringstream result;
    result << header << ",predicted_cell\n";
    std::string line;
    int line_no = 1;
    std::size_t rows = 0;
    std::size_t correct = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != columns.size())
            throw std::runtime_error(fmt::format("{}:{}: expected {} columns, got {}", config.input_csv.string(),
                                                 line_no, columns.size(), cells.size()));
        ChannelVector h;
        try {
            for (const auto &[re, im] : re_im)
                h.entries.emplace_back(std::stod(cells[re]), std::stod(cells[im]));
        } catch (const std::logic_error &) {
            throw std::runtime_error(fmt::format("{}:{}: malformed number", config.input_csv.string(), line_no));
        }
        const int cell = nn::predict(params, features::make_feature(h, codebook).values);
        result << line << ',' << cell << '\n';
        ++rows;
        if (label_col != index.end() && cells[label_col->second] == std::to_string(cell))
            ++correct;
    }

    OutputDir dir(config.output_dir);
    dir.write("predictions.csv", [&](std::ostream &f) { f << result.str(); });
    dir.commit();
    fmt::print(out, "predicted {} rows\n", rows);
    if (label_col != index.end() && rows > 0)
        fmt::print(out, "accuracy vs. label column: {:.4f}\n", static_cast<double>(correct) / static_cast<double>(rows));
    return 0;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Channel learning for best small-cell selection"};
    app.require_subcommand(1);
    CliConfig config;
    int jobs = 0;

    auto add_common = [&](CLI::App *sub, bool needs_scenario) {
        auto *opt = sub->add_option("--scenario", config.scenario_path, "Scenario file (key=value lines)");
        if (needs_scenario)
            opt->required();
        sub->add_option("--out", config.output_dir, "Output directory (created if absent)");
        sub->add_option("--set", config.overrides, "Override a scenario key, KEY=VALUE (repeatable)");
        sub->add_option("--jobs", jobs, "Parallel runs");
    };

    auto *compare = app.add_subcommand("compare", "Compare RS, KNN, NN-CR and NN-LO");
    auto *sweep = app.add_subcommand("sweep", "NN accuracy over antenna and scatterer counts");
    auto *distance = app.add_subcommand("distance", "Channel distance versus geographic distance");
    auto *train = app.add_subcommand("train", "Train a channel network and write model + codebook");
    auto *predict = app.add_subcommand("predict", "Predict best cells for raw array responses");
    for (auto *sub : {compare, sweep, distance, train})
        add_common(sub, true);
    add_common(predict, false);
    predict->add_option("--model", config.model_dir, "Directory with model.txt and codebook.csv (default: --out)");
    predict->add_option("--input", config.input_csv, "CSV with columns re_0,im_0,...")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }
    if (jobs != 0)
        config.jobs = jobs;

    try {
        if (*compare) {
            config.subcommand = "compare";
            return cmd_compare(config, out);
        }
        if (*sweep) {
            config.subcommand = "sweep";
            return cmd_sweep(config, out);
        }
        if (*distance) {
            config.subcommand = "distance";
            return cmd_distance(config, out);
        }
        if (*train) {
            config.subcommand = "train";
            return cmd_train(config, out);
        }
        config.subcommand = "predict";
        return cmd_predict(config, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace chanlearn::cli
