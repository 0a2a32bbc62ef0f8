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

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace chanlearn::baselines {

int RandomSelector::next(int k_cells) { return rs_predict(rng_, k_cells); }

int rs_predict(Rng &rng, int k_cells)
{
    if (k_cells < 1)
        throw std::invalid_argument("rs_predict: k_cells must be positive");
    return static_cast<int>(rng.index(static_cast<std::size_t>(k_cells)));
}

std::vector<double> stack_real_imag(const ChannelVector &h)
{
    std::vector<double> out(2 * h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        out[k] = h[k].real();
        out[h.size() + k] = h[k].imag();
    }
    return out;
}

KnnModel::KnnModel(std::vector<std::vector<double>> points, std::vector<int> labels, int k)
    : points_(std::move(points)), labels_(std::move(labels)), k_(k), dim_(0)
{
    if (points_.size() != labels_.size())
        throw std::invalid_argument("knn: points and labels differ in length");
    if (k_ < 1 || static_cast<std::size_t>(k_) > points_.size())
        throw std::invalid_argument(fmt::format("knn: k={} with {} stored points", k_, points_.size()));
    dim_ = points_.front().size();
    for (const auto &p : points_)
        if (p.size() != dim_)
            throw std::invalid_argument("knn: stored points differ in dimension");
}

int KnnModel::predict(std::span<const double> query) const
{
    const int ks[] = {k_};
    return predict_many(query, ks).front();
}

std::vector<int> KnnModel::predict_many(std::span<const double> query, std::span<const int> ks) const
{
    if (query.size() != dim_)
        throw std::invalid_argument(fmt::format("knn: query has dimension {}, model has {}", query.size(), dim_));
    int k_max = 0;
    for (int k : ks) {
        if (k < 1 || static_cast<std::size_t>(k) > points_.size())
            throw std::invalid_argument(fmt::format("knn: k={} with {} stored points", k, points_.size()));
        k_max = std::max(k_max, k);
    }

    std::vector<std::pair<double, std::size_t>> dist(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double acc = 0.0;
        const auto &p = points_[i];
        for (std::size_t d = 0; d < dim_; ++d) {
            const double e = p[d] - query[d];
            acc += e * e;
        }
        dist[i] = {acc, i};
    }
    // Pair ordering breaks distance ties by insertion order.
    std::partial_sort(dist.begin(), dist.begin() + k_max, dist.end());

    std::vector<int> out;
    out.reserve(ks.size());
    for (int k : ks) {
        std::map<int, int> votes;
        for (int i = 0; i < k; ++i)
            ++votes[labels_[dist[static_cast<std::size_t>(i)].second]];
        // Map iteration is by ascending label, so a strict > keeps the lowest on ties.
        int best = votes.begin()->first;
        int best_count = 0;
        for (const auto &[label, count] : votes)
            if (count > best_count) {
                best = label;
                best_count = count;
            }
        out.push_back(best);
    }
    return out;
}

int knn_predict(const KnnModel &model, std::span<const double> query) { return model.predict(query); }

std::vector<double> normalize_location(Point2 p, const gscm::Geometry &geometry)
{
    const Point2 rel = p - geometry.array_origin;
    return {dot(rel, geometry.array_orientation) / geometry.coverage_radius,
            dot(rel, geometry.broadside()) / geometry.coverage_radius};
}

optim::TrainResult nnlo_train(std::span<const Point2> locations, std::span<const int> labels,
                              const gscm::Geometry &geometry, int hidden_units,
                              const optim::TrainOptions &opts, std::uint64_t seed)
{
    std::vector<std::vector<double>> inputs;
    inputs.reserve(locations.size());
    for (const auto &p : locations)
        inputs.push_back(normalize_location(p, geometry));
    const int k_cells = static_cast<int>(geometry.small_cells.size());
    const nn::NetShape shape{{2, hidden_units, k_cells}};
    return optim::train(nn::make_batch(inputs, labels, k_cells), shape, opts, seed);
}

int nnlo_predict(const nn::NetParams &params, Point2 location, const gscm::Geometry &geometry)
{
    return nn::predict(params, normalize_location(location, geometry));
}

} // namespace chanlearn::baselines
