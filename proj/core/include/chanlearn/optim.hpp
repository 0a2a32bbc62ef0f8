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

#ifndef CHANLEARN_OPTIM_HPP
#define CHANLEARN_OPTIM_HPP

#include "chanlearn/neuralnet.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace chanlearn::optim {

enum class StopReason { max_iters, grad_tol, cost_tol, line_search_fail };

std::string_view to_string(StopReason reason);

struct OptimOptions {
    int max_iters = 200;
    double grad_tol = 1e-5;          // on the Euclidean gradient norm
    double cost_tol = 1e-9;          // relative decrease per iteration
    double c1 = 1e-4;                // sufficient decrease
    double c2 = 0.1;                 // curvature
    int restart_every = 0;           // 0 restarts every n_params iterations
    int max_line_search_evals = 40;
};

struct OptimReport {
    int iterations = 0;
    std::vector<double> cost_trace;      // iterations + 1 entries
    std::vector<double> grad_norm_trace; // iterations + 1 entries
    double final_gradient_norm = 0.0;
    StopReason stop_reason = StopReason::max_iters;
};

// Returns the cost at theta and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd &theta, Eigen::VectorXd &grad)>;

struct MinimizeResult {
    Eigen::VectorXd theta;
    OptimReport report;
};

// Nonlinear conjugate gradient with Polak-Ribiere+ updates and a strong Wolfe
// line search. Falls back to steepest descent every `restart_every`
// iterations or when the conjugate direction is not a descent direction. A
// line search failure on a steepest-descent direction ends the run with
// StopReason::line_search_fail; the best point seen is returned either way.
MinimizeResult minimize(const Objective &objective, Eigen::VectorXd theta0, const OptimOptions &opts = {});

// iter,cost,grad_norm
void write_report_csv(std::ostream &out, const OptimReport &report);

struct TrainOptions {
    nn::Regularization reg;
    OptimOptions optim;
};

struct TrainResult {
    nn::NetParams params;
    OptimReport report;
};

// Full-batch training of a freshly initialized network.
TrainResult train(const nn::Batch &batch, const nn::NetShape &shape, const TrainOptions &opts, std::uint64_t seed);

} // namespace chanlearn::optim

#endif
