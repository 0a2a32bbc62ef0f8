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

#include "chanlearn/featpipe.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace chanlearn::features {

Codebook::Codebook(std::vector<double> levels) : levels_(std::move(levels))
{
    if (levels_.size() < 2)
        throw std::invalid_argument("codebook: at least two levels required");
    for (std::size_t j = 0; j < levels_.size(); ++j) {
        if (!std::isfinite(levels_[j]))
            throw std::invalid_argument("codebook: non-finite level");
        if (j > 0 && !(levels_[j] > levels_[j - 1]))
            throw std::invalid_argument("codebook: levels must be strictly increasing");
    }
    boundaries_.reserve(levels_.size() - 1);
    for (std::size_t j = 0; j + 1 < levels_.size(); ++j)
        boundaries_.push_back(0.5 * (levels_[j] + levels_[j + 1]));
}

std::size_t Codebook::index_of(double value) const
{
    // First boundary >= value: a value equal to a boundary stays below it.
    return static_cast<std::size_t>(
        std::lower_bound(boundaries_.begin(), boundaries_.end(), value) - boundaries_.begin());
}

std::vector<double> angular_magnitude(const ChannelVector &h_o)
{
    const std::size_t n = h_o.size();
    if (n == 0)
        throw std::invalid_argument("angular_magnitude: empty channel");
    std::vector<Complex> twiddle(n);
    for (std::size_t j = 0; j < n; ++j)
        twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));

    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        Complex acc{};
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += h_o[k] * twiddle[idx];
            idx += m;
            if (idx >= n)
                idx -= n;
        }
        out[m] = std::abs(acc);
    }
    return out;
}

std::vector<double> log_compress(std::span<const double> mags, double floor)
{
    if (!(floor > 0.0))
        throw std::invalid_argument("log_compress: floor must be positive");
    std::vector<double> out(mags.size());
    std::transform(mags.begin(), mags.end(), out.begin(),
                   [floor](double m) { return std::log10(std::max(m, floor)); });
    return out;
}

namespace {

// Cell j covers sorted[start[j], start[j+1]).
std::vector<std::size_t> cell_starts(const std::vector<double> &sorted, const Codebook &cb)
{
    std::vector<std::size_t> start(cb.size() + 1);
    start.front() = 0;
    start.back() = sorted.size();
    for (std::size_t j = 0; j < cb.boundaries().size(); ++j) {
        // Values equal to the boundary belong to the lower cell.
        start[j + 1] = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), cb.boundaries()[j]) - sorted.begin());
    }
    return start;
}

double sorted_mse(const std::vector<double> &sorted, const Codebook &cb, const std::vector<std::size_t> &start)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < cb.size(); ++j) {
        const double c = cb.levels()[j];
        for (std::size_t i = start[j]; i < start[j + 1]; ++i) {
            const double e = sorted[i] - c;
            acc += e * e;
        }
    }
    return acc / static_cast<double>(sorted.size());
}

} // namespace

double quantization_mse(std::span<const double> samples, const Codebook &codebook)
{
    if (samples.empty())
        return 0.0;
    double acc = 0.0;
    for (double v : samples) {
        const double e = v - codebook.levels()[codebook.index_of(v)];
        acc += e * e;
    }
    return acc / static_cast<double>(samples.size());
}

Codebook lloyd_train(std::span<const double> samples, int n_levels, int max_iters, double tol,
                     std::vector<double> *mse_trace)
{
    if (n_levels < 2)
        throw std::invalid_argument("lloyd_train: n_levels must be at least 2");
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double v : sorted)
        if (!std::isfinite(v))
            throw std::invalid_argument("lloyd_train: non-finite sample");
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> distinct;
    std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));
    const auto levels = static_cast<std::size_t>(n_levels);
    if (distinct.size() < levels)
        throw std::invalid_argument(fmt::format(
            "lloyd_train: {} distinct samples, need at least {}", distinct.size(), n_levels));

    // Initial levels at evenly spaced ranks among the distinct values; the rank
    // step is at least one, so levels are strictly increasing.
    std::vector<double> init(levels);
    const double step = static_cast<double>(distinct.size()) / static_cast<double>(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        const auto r = static_cast<std::size_t>(std::floor((static_cast<double>(j) + 0.5) * step));
        init[j] = distinct[std::min(r, distinct.size() - 1)];
    }
    Codebook cb(std::move(init));

    auto start = cell_starts(sorted, cb);
    double mse = sorted_mse(sorted, cb, start);
    if (mse_trace) {
        mse_trace->clear();
        mse_trace->push_back(mse);
    }

    for (int it = 0; it < max_iters; ++it) {
        // Centroid step; empty cells keep their level, which stays between the
        // neighbouring centroids.
        std::vector<double> next = cb.levels();
        for (std::size_t j = 0; j < levels; ++j) {
            if (start[j + 1] == start[j])
                continue;
            double sum = 0.0;
            for (std::size_t i = start[j]; i < start[j + 1]; ++i)
                sum += sorted[i];
            next[j] = sum / static_cast<double>(start[j + 1] - start[j]);
        }
        Codebook candidate(std::move(next));
        auto candidate_start = cell_starts(sorted, candidate);
        const double candidate_mse = sorted_mse(sorted, candidate, candidate_start);
        // Rounding can make the update a hair worse at a fixed point; keep the
        // previous codebook then.
        if (candidate_mse > mse)
            break;
        const double improvement = mse - candidate_mse;
        cb = std::move(candidate);
        start = std::move(candidate_start);
        mse = candidate_mse;
        if (mse_trace)
            mse_trace->push_back(mse);
        if (improvement < tol)
            break;
    }
    return cb;
}

FeatureVector quantize_normalize(std::span<const double> values, const Codebook &codebook)
{
    const double denom = static_cast<double>(codebook.size() - 1);
    FeatureVector out;
    out.values.reserve(values.size());
    for (double v : values)
        out.values.push_back(-1.0 + 2.0 * static_cast<double>(codebook.index_of(v)) / denom);
    return out;
}

FeatureVector make_feature(const ChannelVector &h_o, const Codebook &codebook, double floor)
{
    return quantize_normalize(log_compress(angular_magnitude(h_o), floor), codebook);
}

void write_codebook_csv(std::ostream &out, const Codebook &codebook)
{
    out << "level_index,codepoint,upper_boundary\n";
    for (std::size_t j = 0; j < codebook.size(); ++j) {
        if (j < codebook.boundaries().size())
            fmt::print(out, "{},{:.17g},{:.17g}\n", j, codebook.levels()[j], codebook.boundaries()[j]);
        else
            fmt::print(out, "{},{:.17g},inf\n", j, codebook.levels()[j]);
    }
}

Codebook read_codebook_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("level_index", 0) != 0)
        throw std::runtime_error("codebook csv: missing header");
    std::vector<double> levels;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string idx, code;
        if (!std::getline(row, idx, ',') || !std::getline(row, code, ','))
            throw std::runtime_error(fmt::format("codebook csv: malformed line {}", line_no));
        try {
            if (std::stoul(idx) != levels.size())
                throw std::runtime_error(fmt::format("codebook csv: unexpected level index on line {}", line_no));
            levels.push_back(std::stod(code));
        } catch (const std::logic_error &) {
            throw std::runtime_error(fmt::format("codebook csv: malformed number on line {}", line_no));
        }
    }
    return Codebook(std::move(levels));
}

} // namespace chanlearn::features
