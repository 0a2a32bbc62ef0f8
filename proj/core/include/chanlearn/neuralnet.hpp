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

#ifndef CHANLEARN_NEURALNET_HPP
#define CHANLEARN_NEURALNET_HPP

#include "chanlearn/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

// Fully connected sigmoid network with per-entry cross-entropy cost.
//
// Parameters live in one flat vector. Canonical order, per layer l from the
// input side: weights W_l (out x in) row-major, then biases b_l (out).
namespace chanlearn::nn {

// Lower clamp for outputs inside the logarithms; the upper clamp is 1 - eps.
inline constexpr double kOutputClamp = 1e-12;

struct NetShape {
    std::vector<int> layer_sizes;   // input, hidden..., output

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    std::size_t n_layers() const { return layer_sizes.size() - 1; }
    std::size_t n_params() const;
    // At least one hidden layer and all sizes positive.
    void validate() const;

    friend bool operator==(const NetShape &, const NetShape &) = default;
};

struct NetParams {
    NetShape shape;
    Eigen::VectorXd theta;
};

struct Regularization {
    double lambda = 0.0;
    bool include_bias = false;
};

// Column j of `inputs` and `targets` is sample j.
struct Batch {
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd targets;

    std::size_t size() const { return static_cast<std::size_t>(inputs.cols()); }
};

// Hard-coded targets from integer labels.
Batch make_batch(std::span<const std::vector<double>> inputs, std::span<const int> labels, int n_outputs);
// Arbitrary targets, one vector per sample.
Batch make_batch(std::span<const std::vector<double>> inputs, std::span<const std::vector<double>> targets);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
NetParams init_params(const NetShape &shape, std::uint64_t seed);

std::vector<double> forward(const NetParams &params, std::span<const double> x);
// Outputs for every column of `inputs`.
Eigen::MatrixXd forward_batch(const NetParams &params, const Eigen::MatrixXd &inputs);

std::vector<double> encode_hard(int label, int k_cells);
// |h_j| / sum_i |h_i|.
std::vector<double> encode_softmax(const ChannelVector &h_u);

double cost(const NetParams &params, const Batch &batch, const Regularization &reg);
Eigen::VectorXd gradient(const NetParams &params, const Batch &batch, const Regularization &reg);
// Cost and backpropagated gradient in one pass.
double cost_and_gradient(const NetShape &shape, const Eigen::VectorXd &theta, const Batch &batch,
                         const Regularization &reg, Eigen::VectorXd &grad);

// Number of cost_and_gradient evaluations made on the calling thread.
std::uint64_t evaluation_count();

// Argmax of the outputs, ties to the lowest index.
int predict(const NetParams &params, std::span<const double> x);
std::size_t argmax(std::span<const double> values);

// Text format: "layers: a,b,c" then one parameter per line in canonical order.
void write_params(std::ostream &out, const NetParams &params);
NetParams read_params(std::istream &in);

} // namespace chanlearn::nn

#endif
