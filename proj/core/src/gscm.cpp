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

#include "chanlearn/gscm.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace chanlearn::gscm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(-i*2*pi*d/lambda) with the integer number of cycles removed first.
Complex propagation_phase(double d, double wavelength)
{
    const double cycles = d / wavelength;
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, -kTwoPi * frac);
}

void require_distance(double d, const char *what)
{
    if (!(d > kMinDistance))
        throw std::invalid_argument(fmt::format("degenerate geometry: zero {} distance", what));
}

void rescale_to_rician(ChannelComponents &c, double k_linear)
{
    const double p_scat = power(c.scattered);
    if (p_scat <= 0.0)
        return;
    const double scale = std::sqrt(power(c.los) / (k_linear * p_scat));
    for (auto &v : c.scattered.entries)
        v *= scale;
}

} // namespace

std::vector<Point2> Geometry::antenna_positions() const
{
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(n_antennas));
    for (int k = 0; k < n_antennas; ++k)
        out.push_back(array_origin + (k * antenna_spacing) * array_orientation);
    return out;
}

bool Geometry::in_coverage(Point2 p, double tol) const
{
    const Point2 d = p - array_origin;
    return norm(d) <= coverage_radius * (1.0 + tol) && dot(d, broadside()) >= -tol * coverage_radius;
}

void Geometry::validate() const
{
    if (n_antennas < 1)
        throw std::invalid_argument("geometry: n_antennas must be positive");
    if (!(coverage_radius > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("geometry: coverage_radius and wavelength must be positive");
    if (std::abs(norm(array_orientation) - 1.0) > 1e-12)
        throw std::invalid_argument("geometry: array_orientation must be a unit vector");
    if (std::abs(antenna_spacing - wavelength / 2.0) > 1e-12 * wavelength)
        throw std::invalid_argument("geometry: antenna_spacing must be half a wavelength");
    if (reflection.size() != scatterers.size())
        throw std::invalid_argument("geometry: one reflection coefficient per scatterer required");
    for (const auto &s : scatterers)
        if (!in_coverage(s))
            throw std::invalid_argument(fmt::format("geometry: scatterer ({}, {}) outside coverage", s.x, s.y));
    for (std::size_t i = 0; i < small_cells.size(); ++i) {
        if (!in_coverage(small_cells[i]))
            throw std::invalid_argument(fmt::format("geometry: small cell {} outside coverage", i));
        for (std::size_t j = 0; j < i; ++j)
            if (small_cells[i] == small_cells[j])
                throw std::invalid_argument(fmt::format("geometry: small cells {} and {} coincide", j, i));
    }
}

double GscmParams::rician_k_linear() const { return std::pow(10.0, rician_k_db / 10.0); }

void GscmParams::validate() const
{
    if (!std::isfinite(rician_k_db))
        throw std::invalid_argument("gscm: rician_k_db must be finite");
    if (!(pathloss_exponent >= 0.0))
        throw std::invalid_argument("gscm: pathloss_exponent must be non-negative");
    if (!(reference_distance > 0.0))
        throw std::invalid_argument("gscm: reference_distance must be positive");
}

ChannelVector ChannelComponents::total() const
{
    ChannelVector out = los;
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += scattered[k];
    return out;
}

double path_amplitude(double d, const GscmParams &params)
{
    return std::pow(d / params.reference_distance, -params.pathloss_exponent / 2.0);
}

double broadside_angle(const Geometry &geometry, Point2 p)
{
    const Point2 d = p - geometry.array_origin;
    return std::atan2(dot(d, geometry.array_orientation), dot(d, geometry.broadside()));
}

Point2 sample_coverage_point(Rng &rng, const Geometry &geometry)
{
    // sqrt on the radius gives uniform density over area.
    const double r = geometry.coverage_radius * std::sqrt(rng.uniform());
    const double phi = std::numbers::pi * rng.uniform();
    return geometry.array_origin + (r * std::cos(phi)) * geometry.array_orientation +
           (r * std::sin(phi)) * geometry.broadside();
}

std::vector<Point2> place_scatterers(std::uint64_t seed, int n_scatterers, const Geometry &geometry)
{
    if (n_scatterers < 0)
        throw std::invalid_argument("place_scatterers: n_scatterers must be non-negative");
    Rng rng(seed);
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(n_scatterers));
    for (int i = 0; i < n_scatterers; ++i)
        out.push_back(sample_coverage_point(rng, geometry));
    return out;
}

std::vector<Complex> draw_reflection_coefficients(std::uint64_t seed, int n)
{
    Rng rng(seed);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        out.emplace_back(re / std::numbers::sqrt2, im / std::numbers::sqrt2);
    }
    return out;
}

ChannelVector steering_vector(double angle, int n_antennas)
{
    if (n_antennas < 1)
        throw std::invalid_argument("steering_vector: n_antennas must be positive");
    const double s = std::sin(angle);
    ChannelVector out;
    out.entries.resize(static_cast<std::size_t>(n_antennas));
    for (int k = 0; k < n_antennas; ++k)
        out.entries[static_cast<std::size_t>(k)] = std::polar(1.0, -std::numbers::pi * k * s);
    return out;
}

ChannelModel::ChannelModel(Geometry geometry, GscmParams params)
    : geometry_(std::move(geometry)), params_(params), k_linear_(params.rician_k_linear())
{
    geometry_.validate();
    params_.validate();

    const std::size_t n_cells = geometry_.small_cells.size();
    scatterer_to_array_.reserve(geometry_.scatterers.size());
    scatter_steering_.reserve(geometry_.scatterers.size());
    scatter_to_cell_.reserve(geometry_.scatterers.size() * n_cells);
    for (const auto &s : geometry_.scatterers) {
        const double d = distance(s, geometry_.array_origin);
        require_distance(d, "scatterer-to-array");
        scatterer_to_array_.push_back(d);
        scatter_steering_.push_back(
            steering_vector(broadside_angle(geometry_, s), geometry_.n_antennas).entries);
        for (const auto &cell : geometry_.small_cells) {
            const double dc = distance(s, cell);
            require_distance(dc, "scatterer-to-small-cell");
            scatter_to_cell_.push_back(path_amplitude(dc, params_) *
                                       propagation_phase(dc, geometry_.wavelength));
        }
    }
}

bool ChannelModel::is_degenerate(Point2 user, double clearance) const
{
    // The array is collinear, so the closest antenna is the projection onto
    // the array segment.
    const Point2 rel = user - geometry_.array_origin;
    const double span = (geometry_.n_antennas - 1) * geometry_.antenna_spacing;
    const double along = std::clamp(dot(rel, geometry_.array_orientation), 0.0, span);
    if (distance(user, geometry_.array_origin + along * geometry_.array_orientation) < clearance)
        return true;
    for (const auto &s : geometry_.scatterers)
        if (distance(user, s) < clearance)
            return true;
    for (const auto &c : geometry_.small_cells)
        if (distance(user, c) < clearance)
            return true;
    return false;
}

ChannelComponents ChannelModel::array_components(Point2 user) const
{
    const auto n = static_cast<std::size_t>(geometry_.n_antennas);
    const double d_los = distance(user, geometry_.array_origin);
    require_distance(d_los, "user-to-array");

    ChannelComponents c;
    c.los = steering_vector(broadside_angle(geometry_, user), geometry_.n_antennas);
    const Complex los_gain = path_amplitude(d_los, params_) * propagation_phase(d_los, geometry_.wavelength);
    for (auto &v : c.los.entries)
        v *= los_gain;

    c.scattered.entries.assign(n, Complex{});
    for (std::size_t s = 0; s < geometry_.scatterers.size(); ++s) {
        const double d_us = distance(user, geometry_.scatterers[s]);
        require_distance(d_us, "user-to-scatterer");
        const double d_sa = scatterer_to_array_[s];
        const Complex gain = path_amplitude(d_us, params_) * path_amplitude(d_sa, params_) *
                             propagation_phase(d_us + d_sa, geometry_.wavelength) *
                             geometry_.reflection[s];
        const auto &steer = scatter_steering_[s];
        for (std::size_t k = 0; k < n; ++k)
            c.scattered.entries[k] += gain * steer[k];
    }
    rescale_to_rician(c, k_linear_);
    return c;
}

ChannelComponents ChannelModel::small_cell_components(Point2 user) const
{
    const std::size_t n_cells = geometry_.small_cells.size();
    ChannelComponents c;
    c.los.role = ChannelRole::unobservable;
    c.scattered.role = ChannelRole::unobservable;
    c.los.entries.resize(n_cells);
    c.scattered.entries.assign(n_cells, Complex{});

    std::vector<Complex> user_leg(geometry_.scatterers.size());
    for (std::size_t s = 0; s < geometry_.scatterers.size(); ++s) {
        const double d_us = distance(user, geometry_.scatterers[s]);
        require_distance(d_us, "user-to-scatterer");
        user_leg[s] = path_amplitude(d_us, params_) * propagation_phase(d_us, geometry_.wavelength) *
                      geometry_.reflection[s];
    }

    ChannelComponents link;
    link.los.entries.resize(1);
    link.scattered.entries.resize(1);
    for (std::size_t j = 0; j < n_cells; ++j) {
        const double d = distance(user, geometry_.small_cells[j]);
        require_distance(d, "user-to-small-cell");
        link.los[0] = path_amplitude(d, params_) * propagation_phase(d, geometry_.wavelength);
        link.scattered[0] = Complex{};
        for (std::size_t s = 0; s < user_leg.size(); ++s)
            link.scattered[0] += user_leg[s] * scatter_to_cell_[s * n_cells + j];
        // Each small cell is its own link, so the Rician factor holds per entry.
        rescale_to_rician(link, k_linear_);
        c.los[j] = link.los[0];
        c.scattered[j] = link.scattered[0];
    }
    return c;
}

ChannelVector channel_to_array(Point2 user, const Geometry &geometry, const GscmParams &params)
{
    return ChannelModel(geometry, params).to_array(user);
}

ChannelVector channel_to_small_cells(Point2 user, const Geometry &geometry, const GscmParams &params)
{
    return ChannelModel(geometry, params).to_small_cells(user);
}

std::size_t best_cell_label(const ChannelVector &h_u)
{
    if (h_u.empty())
        throw std::invalid_argument("best_cell_label: empty channel");
    std::size_t best = 0;
    double best_mag = std::norm(h_u[0]);
    for (std::size_t j = 1; j < h_u.size(); ++j) {
        const double m = std::norm(h_u[j]);
        if (m > best_mag) {
            best = j;
            best_mag = m;
        }
    }
    return best;
}

void write_geometry_csv(std::ostream &out, const Geometry &geometry, std::span<const Point2> users)
{
    out << "kind,x,y\n";
    auto emit = [&out](const char *kind, Point2 p) { fmt::print(out, "{},{:.6f},{:.6f}\n", kind, p.x, p.y); };
    for (const auto &p : geometry.scatterers)
        emit("scatterer", p);
    for (const auto &p : geometry.small_cells)
        emit("small_cell", p);
    for (const auto &p : geometry.antenna_positions())
        emit("antenna", p);
    for (const auto &p : users)
        emit("user", p);
}

} // namespace chanlearn::gscm
