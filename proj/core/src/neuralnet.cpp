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

#include "chanlearn/neuralnet.hpp"

#include "chanlearn/random.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace chanlearn::nn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMatrix>;
using Weights = Eigen::Map<RowMatrix>;

thread_local std::uint64_t g_evaluations = 0;

struct LayerView {
    Eigen::Index in;
    Eigen::Index out;
    Eigen::Index weight_offset;
    Eigen::Index bias_offset;
};

std::vector<LayerView> layer_views(const NetShape &shape)
{
    std::vector<LayerView> views;
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l < shape.n_layers(); ++l) {
        const Eigen::Index in = shape.layer_sizes[l];
        const Eigen::Index out = shape.layer_sizes[l + 1];
        views.push_back({in, out, offset, offset + in * out});
        offset += (in + 1) * out;
    }
    return views;
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd &z)
{
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

void check_theta(const NetShape &shape, const Eigen::VectorXd &theta)
{
    if (static_cast<std::size_t>(theta.size()) != shape.n_params())
        throw std::invalid_argument(fmt::format("theta has {} entries, shape needs {}", theta.size(), shape.n_params()));
}

void check_batch(const NetShape &shape, const Batch &batch)
{
    if (batch.size() == 0)
        throw std::invalid_argument("empty batch");
    if (batch.inputs.rows() != shape.input_size() || batch.targets.rows() != shape.output_size() ||
        batch.targets.cols() != batch.inputs.cols())
        throw std::invalid_argument("batch dimensions do not match network shape");
}

// Activations of every layer, input included.
std::vector<Eigen::MatrixXd> activations(const NetShape &shape, const Eigen::VectorXd &theta,
                                         const Eigen::MatrixXd &inputs)
{
    const auto views = layer_views(shape);
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(views.size() + 1);
    acts.push_back(inputs);
    for (const auto &v : views) {
        ConstWeights w(theta.data() + v.weight_offset, v.out, v.in);
        const auto b = theta.segment(v.bias_offset, v.out);
        Eigen::MatrixXd z = w * acts.back();
        z.colwise() += b;
        acts.push_back(sigmoid(z));
    }
    return acts;
}

double regularizer(const NetShape &shape, const Eigen::VectorXd &theta, const Regularization &reg)
{
    if (reg.lambda == 0.0)
        return 0.0;
    if (reg.include_bias)
        return reg.lambda * theta.squaredNorm();
    double acc = 0.0;
    for (const auto &v : layer_views(shape))
        acc += theta.segment(v.weight_offset, v.in * v.out).squaredNorm();
    return reg.lambda * acc;
}

double cross_entropy(const Eigen::MatrixXd &outputs, const Eigen::MatrixXd &targets)
{
    double acc = 0.0;
    for (Eigen::Index j = 0; j < outputs.cols(); ++j) {
        for (Eigen::Index k = 0; k < outputs.rows(); ++k) {
            const double y = std::clamp(outputs(k, j), kOutputClamp, 1.0 - kOutputClamp);
            const double t = targets(k, j);
            acc -= t * std::log(y) + (1.0 - t) * std::log(1.0 - y);
        }
    }
    return acc / static_cast<double>(outputs.cols());
}

} // namespace

std::size_t NetShape::n_params() const
{
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
        n += static_cast<std::size_t>(layer_sizes[l] + 1) * static_cast<std::size_t>(layer_sizes[l + 1]);
    return n;
}

void NetShape::validate() const
{
    if (layer_sizes.size() < 3)
        throw std::invalid_argument("net shape needs input, output and at least one hidden layer");
    for (int s : layer_sizes)
        if (s < 1)
            throw std::invalid_argument("net shape: layer sizes must be positive");
}

Batch make_batch(std::span<const std::vector<double>> inputs, std::span<const int> labels, int n_outputs)
{
    if (inputs.size() != labels.size())
        throw std::invalid_argument("make_batch: inputs and labels differ in length");
    std::vector<std::vector<double>> targets;
    targets.reserve(labels.size());
    for (int label : labels)
        targets.push_back(encode_hard(label, n_outputs));
    return make_batch(inputs, targets);
}

Batch make_batch(std::span<const std::vector<double>> inputs, std::span<const std::vector<double>> targets)
{
    if (inputs.size() != targets.size())
        throw std::invalid_argument("make_batch: inputs and targets differ in length");
    if (inputs.empty())
        throw std::invalid_argument("make_batch: empty batch");
    const auto n_in = static_cast<Eigen::Index>(inputs.front().size());
    const auto n_out = static_cast<Eigen::Index>(targets.front().size());
    Batch batch{Eigen::MatrixXd(n_in, static_cast<Eigen::Index>(inputs.size())),
                Eigen::MatrixXd(n_out, static_cast<Eigen::Index>(inputs.size()))};
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        if (static_cast<Eigen::Index>(inputs[j].size()) != n_in ||
            static_cast<Eigen::Index>(targets[j].size()) != n_out)
            throw std::invalid_argument(fmt::format("make_batch: sample {} has inconsistent width", j));
        const auto col = static_cast<Eigen::Index>(j);
        batch.inputs.col(col) = Eigen::Map<const Eigen::VectorXd>(inputs[j].data(), n_in);
        batch.targets.col(col) = Eigen::Map<const Eigen::VectorXd>(targets[j].data(), n_out);
    }
    return batch;
}

NetParams init_params(const NetShape &shape, std::uint64_t seed)
{
    shape.validate();
    NetParams p{shape, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.n_params()))};
    Rng rng(seed);
    for (const auto &v : layer_views(shape)) {
        const double r = std::sqrt(6.0 / static_cast<double>(v.in + v.out));
        for (Eigen::Index i = 0; i < v.in * v.out; ++i)
            p.theta[v.weight_offset + i] = rng.uniform(-r, r);
    }
    return p;
}

Eigen::MatrixXd forward_batch(const NetParams &params, const Eigen::MatrixXd &inputs)
{
    check_theta(params.shape, params.theta);
    if (inputs.rows() != params.shape.input_size())
        throw std::invalid_argument(fmt::format("input has {} entries, network expects {}", inputs.rows(),
                                                params.shape.input_size()));
    return activations(params.shape, params.theta, inputs).back();
}

std::vector<double> forward(const NetParams &params, std::span<const double> x)
{
    const Eigen::MatrixXd in = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::MatrixXd out = forward_batch(params, in);
    return {out.data(), out.data() + out.size()};
}

std::vector<double> encode_hard(int label, int k_cells)
{
    if (k_cells < 1 || label < 0 || label >= k_cells)
        throw std::invalid_argument(fmt::format("encode_hard: label {} outside [0, {})", label, k_cells));
    std::vector<double> out(static_cast<std::size_t>(k_cells), 0.0);
    out[static_cast<std::size_t>(label)] = 1.0;
    return out;
}

std::vector<double> encode_softmax(const ChannelVector &h_u)
{
    if (h_u.empty())
        throw std::invalid_argument("encode_softmax: empty channel");
    std::vector<double> out(h_u.size());
    double total = 0.0;
    for (std::size_t j = 0; j < h_u.size(); ++j) {
        out[j] = std::abs(h_u[j]);
        total += out[j];
    }
    if (!(total > 0.0))
        throw std::invalid_argument("encode_softmax: all-zero channel");
    for (auto &v : out)
        v /= total;
    return out;
}

double cost(const NetParams &params, const Batch &batch, const Regularization &reg)
{
    check_theta(params.shape, params.theta);
    check_batch(params.shape, batch);
    const auto acts = activations(params.shape, params.theta, batch.inputs);
    return cross_entropy(acts.back(), batch.targets) + regularizer(params.shape, params.theta, reg);
}

Eigen::VectorXd gradient(const NetParams &params, const Batch &batch, const Regularization &reg)
{
    Eigen::VectorXd grad;
    cost_and_gradient(params.shape, params.theta, batch, reg, grad);
    return grad;
}

double cost_and_gradient(const NetShape &shape, const Eigen::VectorXd &theta, const Batch &batch,
                         const Regularization &reg, Eigen::VectorXd &grad)
{
    check_theta(shape, theta);
    check_batch(shape, batch);
    ++g_evaluations;

    const auto views = layer_views(shape);
    const auto acts = activations(shape, theta, batch.inputs);
    const double m = static_cast<double>(batch.size());
    const Eigen::MatrixXd &y = acts.back();

    // Sigmoid + cross-entropy: dJ/dz = (y - t) / m, zero where the clamp is active.
    Eigen::MatrixXd delta(y.rows(), y.cols());
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index k = 0; k < y.rows(); ++k) {
            const double yk = y(k, j);
            const bool clamped = yk < kOutputClamp || yk > 1.0 - kOutputClamp;
            delta(k, j) = clamped ? 0.0 : (yk - batch.targets(k, j)) / m;
        }

    grad.setZero(theta.size());
    for (std::size_t l = views.size(); l-- > 0;) {
        const auto &v = views[l];
        const Eigen::MatrixXd &a_prev = acts[l];
        Weights gw(grad.data() + v.weight_offset, v.out, v.in);
        gw.noalias() = delta * a_prev.transpose();
        grad.segment(v.bias_offset, v.out) = delta.rowwise().sum();
        if (l > 0) {
            ConstWeights w(theta.data() + v.weight_offset, v.out, v.in);
            Eigen::MatrixXd back = w.transpose() * delta;
            delta = back.cwiseProduct(a_prev).cwiseProduct((1.0 - a_prev.array()).matrix());
        }
    }

    if (reg.lambda != 0.0) {
        for (const auto &v : views) {
            grad.segment(v.weight_offset, v.in * v.out) += 2.0 * reg.lambda * theta.segment(v.weight_offset, v.in * v.out);
            if (reg.include_bias)
                grad.segment(v.bias_offset, v.out) += 2.0 * reg.lambda * theta.segment(v.bias_offset, v.out);
        }
    }
    return cross_entropy(y, batch.targets) + regularizer(shape, theta, reg);
}

std::uint64_t evaluation_count() { return g_evaluations; }

std::size_t argmax(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("argmax: empty input");
    // max_element returns the first maximum.
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

int predict(const NetParams &params, std::span<const double> x)
{
    return static_cast<int>(argmax(forward(params, x)));
}

void write_params(std::ostream &out, const NetParams &params)
{
    check_theta(params.shape, params.theta);
    fmt::print(out, "layers: {}\n", fmt::join(params.shape.layer_sizes, ","));
    for (Eigen::Index i = 0; i < params.theta.size(); ++i)
        fmt::print(out, "{:.17g}\n", params.theta[i]);
}

NetParams read_params(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("layers:", 0) != 0)
        throw std::runtime_error("model file: expected 'layers:' header");
    NetShape shape;
    std::istringstream sizes(line.substr(7));
    std::string tok;
    while (std::getline(sizes, tok, ',')) {
        try {
            shape.layer_sizes.push_back(std::stoi(tok));
        } catch (const std::logic_error &) {
            throw std::runtime_error(fmt::format("model file: bad layer size '{}'", tok));
        }
    }
    try {
        shape.validate();
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(fmt::format("model file: {}", e.what()));
    }

    NetParams p{shape, Eigen::VectorXd(static_cast<Eigen::Index>(shape.n_params()))};
    Eigen::Index i = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (i >= p.theta.size())
            throw std::runtime_error(fmt::format("model file: more than {} parameters", p.theta.size()));
        try {
            p.theta[i++] = std::stod(line);
        } catch (const std::logic_error &) {
            throw std::runtime_error(fmt::format("model file: bad parameter on line {}", line_no));
        }
    }
    if (i != p.theta.size())
        throw std::runtime_error(fmt::format("model file: {} parameters, shape needs {}", i, p.theta.size()));
    return p;
}

} // namespace chanlearn::nn
