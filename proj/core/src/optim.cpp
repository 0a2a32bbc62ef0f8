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

#include "chanlearn/optim.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace chanlearn::optim {

std::string_view to_string(StopReason reason)
{
    switch (reason) {
    case StopReason::max_iters:
        return "max_iters";
    case StopReason::grad_tol:
        return "grad_tol";
    case StopReason::cost_tol:
        return "cost_tol";
    case StopReason::line_search_fail:
        return "line_search_fail";
    }
    return "unknown";
}

namespace {

struct Trial {
    double alpha = 0.0;
    double f = 0.0;
    double slope = 0.0;     // directional derivative at alpha
    Eigen::VectorXd grad;
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db); nullopt when the
// interpolant has no usable minimum.
std::optional<double> cubic_min(double a, double fa, double da, double b, double fb, double db)
{
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    if (!(disc >= 0.0))
        return std::nullopt;
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom == 0.0)
        return std::nullopt;
    const double x = b - (b - a) * (db + d2 - d1) / denom;
    if (!std::isfinite(x))
        return std::nullopt;
    return x;
}

// Widest cost band treated as rounding noise; bounds any rise in the cost trace.
constexpr double kMaxFlatBand = 1e-12;

class LineSearch {
public:
    LineSearch(const Objective &objective, const OptimOptions &opts, const Eigen::VectorXd &x0,
               const Eigen::VectorXd &dir, double f0, double slope0)
        : objective_(objective), opts_(opts), x0_(x0), dir_(dir), f0_(f0), slope0_(slope0),
          flat_(std::min(kMaxFlatBand, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f0)))
    {
    }

    // Starts from a quadratic fit through f(0), f'(0) and f(guess): exact for
    // quadratic objectives, otherwise a better first trial than the raw guess.
    std::optional<Trial> run(double guess)
    {
        Trial probe = evaluate(guess);
        if (std::isfinite(probe.f)) {
            const double curvature = (probe.f - f0_ - slope0_ * guess) / (guess * guess);
            if (curvature > 0.0) {
                const double alpha = -slope0_ / (2.0 * curvature);
                if (std::isfinite(alpha) && alpha > 0.0 && std::abs(alpha - guess) > 1e-3 * guess)
                    return search(alpha, std::nullopt);
            }
        }
        return search(guess, std::move(probe));
    }

private:
    std::optional<Trial> search(double alpha, std::optional<Trial> first)
    {
        Trial prev{0.0, f0_, slope0_, {}};
        for (int i = 0; evals_ < opts_.max_line_search_evals; ++i) {
            Trial t = (i == 0 && first) ? std::move(*first) : evaluate(alpha);
            if (!sufficient(t) || (i > 0 && higher(t.f, prev.f)))
                return zoom(std::move(prev), std::move(t));
            if (std::abs(t.slope) <= -opts_.c2 * slope0_)
                return t;
            if (t.slope >= 0.0)
                return zoom(std::move(t), std::move(prev));
            prev = std::move(t);
            alpha *= 2.0;
        }
        return std::nullopt;
    }

    // Armijo test, relaxed to "within rounding of f0" as in approximate Wolfe
    // line searches; cost differences inside that band count as ties so the
    // bracket is driven by derivative signs.
    bool sufficient(const Trial &t) const
    {
        return std::isfinite(t.f) && (t.f <= f0_ + opts_.c1 * t.alpha * slope0_ || t.f <= f0_ + flat_);
    }

    bool higher(double a, double b) const { return a > b + flat_; }

    Trial evaluate(double alpha)
    {
        ++evals_;
        Trial t;
        t.alpha = alpha;
        const Eigen::VectorXd x = x0_ + alpha * dir_;
        t.f = objective_(x, t.grad);
        t.slope = std::isfinite(t.f) ? t.grad.dot(dir_) : std::numeric_limits<double>::quiet_NaN();
        return t;
    }

    // lo satisfies sufficient decrease and has the lowest cost so far; the
    // interval (lo, hi) contains a point meeting the strong Wolfe conditions.
    std::optional<Trial> zoom(Trial lo, Trial hi)
    {
        while (evals_ < opts_.max_line_search_evals) {
            const double width = hi.alpha - lo.alpha;
            if (std::abs(width) <= 1e-16 * std::max(1.0, std::abs(lo.alpha)))
                break;
            double alpha = lo.alpha + 0.5 * width;
            if (std::isfinite(hi.f) && std::isfinite(hi.slope)) {
                if (auto c = cubic_min(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope)) {
                    // Keep the trial away from the interval ends.
                    const double a = std::min(lo.alpha, hi.alpha) + 0.1 * std::abs(width);
                    const double b = std::max(lo.alpha, hi.alpha) - 0.1 * std::abs(width);
                    if (*c >= a && *c <= b)
                        alpha = *c;
                }
            }
            Trial t = evaluate(alpha);
            if (!sufficient(t) || higher(t.f, lo.f)) {
                hi = std::move(t);
                continue;
            }
            if (std::abs(t.slope) <= -opts_.c2 * slope0_)
                return t;
            if (t.slope * (hi.alpha - lo.alpha) >= 0.0)
                hi = std::move(lo);
            lo = std::move(t);
        }
        return std::nullopt;
    }

    const Objective &objective_;
    const OptimOptions &opts_;
    const Eigen::VectorXd &x0_;
    const Eigen::VectorXd &dir_;
    double f0_;
    double slope0_;
    double flat_;
    int evals_ = 0;
};

} // namespace

MinimizeResult minimize(const Objective &objective, Eigen::VectorXd theta0, const OptimOptions &opts)
{
    MinimizeResult result{std::move(theta0), {}};
    OptimReport &report = result.report;
    Eigen::VectorXd &x = result.theta;

    Eigen::VectorXd g;
    double f = objective(x, g);
    if (!std::isfinite(f) || g.size() != x.size() || !g.allFinite())
        throw std::invalid_argument("minimize: objective is not finite at the starting point");

    report.cost_trace.push_back(f);
    report.grad_norm_trace.push_back(g.norm());
    report.final_gradient_norm = g.norm();
    if (g.norm() <= opts.grad_tol) {
        report.stop_reason = StopReason::grad_tol;
        return result;
    }

    const int restart_every = opts.restart_every > 0 ? opts.restart_every : static_cast<int>(x.size());
    Eigen::VectorXd dir = -g;
    bool steepest = true;
    int since_restart = 0;
    double prev_alpha = 0.0;
    double prev_slope = 0.0;

    report.stop_reason = StopReason::max_iters;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            dir = -g;
            slope = -g.squaredNorm();
            steepest = true;
            since_restart = 0;
        }

        // Initial step: unit step scaled by the gradient on the first
        // iteration, then matched to the previous first-order decrease.
        double alpha = prev_alpha > 0.0 ? prev_alpha * prev_slope / slope : 1.0 / std::max(1.0, g.norm());
        alpha = std::clamp(alpha, 1e-12, 1e12);

        std::optional<Trial> step = LineSearch(objective, opts, x, dir, f, slope).run(alpha);
        if (!step && !steepest) {
            dir = -g;
            slope = -g.squaredNorm();
            steepest = true;
            since_restart = 0;
            step = LineSearch(objective, opts, x, dir, f, slope).run(1.0 / std::max(1.0, g.norm()));
        }
        if (!step) {
            report.stop_reason = StopReason::line_search_fail;
            break;
        }

        x += step->alpha * dir;
        const double f_prev = f;
        f = step->f;
        Eigen::VectorXd g_new = std::move(step->grad);
        ++report.iterations;
        report.cost_trace.push_back(f);
        report.grad_norm_trace.push_back(g_new.norm());
        report.final_gradient_norm = g_new.norm();

        prev_alpha = step->alpha;
        prev_slope = slope;

        double beta = std::max(0.0, g_new.dot(g_new - g) / g.squaredNorm());
        if (++since_restart >= restart_every) {
            beta = 0.0;
            since_restart = 0;
        }
        dir = -g_new + beta * dir;
        steepest = beta == 0.0;
        g = std::move(g_new);

        if (g.norm() <= opts.grad_tol) {
            report.stop_reason = StopReason::grad_tol;
            break;
        }
        if (f_prev - f <= opts.cost_tol * std::max(1.0, std::abs(f_prev))) {
            report.stop_reason = StopReason::cost_tol;
            break;
        }
    }
    return result;
}

void write_report_csv(std::ostream &out, const OptimReport &report)
{
    out << "iter,cost,grad_norm\n";
    for (std::size_t i = 0; i < report.cost_trace.size(); ++i)
        fmt::print(out, "{},{:.17g},{:.17g}\n", i, report.cost_trace[i], report.grad_norm_trace[i]);
}

TrainResult train(const nn::Batch &batch, const nn::NetShape &shape, const TrainOptions &opts, std::uint64_t seed)
{
    shape.validate();
    if (batch.size() == 0)
        throw std::invalid_argument("train: empty dataset");
    if (batch.inputs.rows() != shape.input_size() || batch.targets.rows() != shape.output_size())
        throw std::invalid_argument(fmt::format("train: batch is {}->{}, network is {}->{}", batch.inputs.rows(),
                                                batch.targets.rows(), shape.input_size(), shape.output_size()));

    nn::NetParams init = nn::init_params(shape, seed);
    const Objective objective = [&](const Eigen::VectorXd &theta, Eigen::VectorXd &grad) {
        return nn::cost_and_gradient(shape, theta, batch, opts.reg, grad);
    };
    MinimizeResult r = minimize(objective, std::move(init.theta), opts.optim);
    return {nn::NetParams{shape, std::move(r.theta)}, std::move(r.report)};
}

} // namespace chanlearn::optim
