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

#ifndef CHANLEARN_BASELINES_HPP
#define CHANLEARN_BASELINES_HPP

#include "chanlearn/gscm.hpp"
#include "chanlearn/optim.hpp"
#include "chanlearn/random.hpp"
#include "chanlearn/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

// Reference algorithms for best-cell prediction: random selection, k nearest
// neighbours over raw array responses, and the neural network fed with the
// true user location.
namespace chanlearn::baselines {

// Uniform random cell index drawn from a seeded stream.
class RandomSelector {
public:
    explicit RandomSelector(std::uint64_t seed) : rng_(seed) {}
    int next(int k_cells);

private:
    Rng rng_;
};

int rs_predict(Rng &rng, int k_cells);

// [Re h_0, ..., Re h_{n-1}, Im h_0, ..., Im h_{n-1}]
std::vector<double> stack_real_imag(const ChannelVector &h);

class KnnModel {
public:
    KnnModel(std::vector<std::vector<double>> points, std::vector<int> labels, int k);

    int k() const { return k_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t dimension() const { return dim_; }
    const std::vector<double> &point(std::size_t i) const { return points_[i]; }
    int label(std::size_t i) const { return labels_[i]; }

    int predict(std::span<const double> query) const;
    // One prediction per entry of `ks`, sharing a single distance pass.
    std::vector<int> predict_many(std::span<const double> query, std::span<const int> ks) const;

private:
    std::vector<std::vector<double>> points_;
    std::vector<int> labels_;
    int k_;
    std::size_t dim_;
};

int knn_predict(const KnnModel &model, std::span<const double> query);

// Location in the array frame scaled by the coverage radius, in [-1, 1]^2.
std::vector<double> normalize_location(Point2 p, const gscm::Geometry &geometry);

optim::TrainResult nnlo_train(std::span<const Point2> locations, std::span<const int> labels,
                              const gscm::Geometry &geometry, int hidden_units,
                              const optim::TrainOptions &opts, std::uint64_t seed);
int nnlo_predict(const nn::NetParams &params, Point2 location, const gscm::Geometry &geometry);

} // namespace chanlearn::baselines

#endif
