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

#ifndef CHANLEARN_GSCM_HPP
#define CHANLEARN_GSCM_HPP

#include "chanlearn/random.hpp"
#include "chanlearn/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

// Geometry-based stochastic channel model: line-of-sight plus single-bounce
// scattering in a planar layout, with a macro-cell uniform linear array at the
// center of an upper half-disc coverage area and single-antenna small cells.
namespace chanlearn::gscm {

// Users closer than this to an antenna, scatterer or small cell are rejected.
inline constexpr double kMinDistance = 1e-9;

struct Geometry {
    Point2 array_origin{};
    Point2 array_orientation{1.0, 0.0};    // unit vector along the array axis
    int n_antennas = 100;
    double antenna_spacing = 0.075;        // wavelength / 2
    std::vector<Point2> small_cells;
    std::vector<Point2> scatterers;
    std::vector<Complex> reflection;       // one coefficient per scatterer
    double coverage_radius = 700.0;
    double wavelength = 0.15;

    // Unit normal on the covered side of the array (broadside direction).
    Point2 broadside() const { return {-array_orientation.y, array_orientation.x}; }
    std::vector<Point2> antenna_positions() const;
    bool in_coverage(Point2 p, double tol = 1e-9) const;
    // Throws std::invalid_argument if any invariant is broken.
    void validate() const;
};

struct GscmParams {
    double rician_k_db = 10.0;
    double pathloss_exponent = 2.0;
    double reference_distance = 1.0;

    double rician_k_linear() const;
    void validate() const;
};

// LoS and scattered parts of one link before they are summed. `scattered`
// is already rescaled to the Rician factor.
struct ChannelComponents {
    ChannelVector los;
    ChannelVector scattered;

    ChannelVector total() const;
};

// Amplitude path loss (d / d_ref)^(-alpha / 2).
double path_amplitude(double d, const GscmParams &params);

// Angle of p seen from the array, measured from broadside, in [-pi/2, pi/2].
double broadside_angle(const Geometry &geometry, Point2 p);

// Uniform draw over the covered upper half-disc.
Point2 sample_coverage_point(Rng &rng, const Geometry &geometry);

std::vector<Point2> place_scatterers(std::uint64_t seed, int n_scatterers,
                                     const Geometry &geometry);

// Unit-mean-power circular complex Gaussian coefficients.
std::vector<Complex> draw_reflection_coefficients(std::uint64_t seed, int n);

// Entry k is exp(-i*pi*k*sin(angle)).
ChannelVector steering_vector(double angle, int n_antennas);

// Precomputes the user-independent legs of every propagation path so that
// channels for many users can be evaluated cheaply. Holds a copy of the
// geometry; immutable after construction.
class ChannelModel {
public:
    ChannelModel(Geometry geometry, GscmParams params);

    const Geometry &geometry() const { return geometry_; }
    const GscmParams &params() const { return params_; }

    ChannelComponents array_components(Point2 user) const;
    ChannelComponents small_cell_components(Point2 user) const;
    ChannelVector to_array(Point2 user) const { return array_components(user).total(); }
    ChannelVector to_small_cells(Point2 user) const { return small_cell_components(user).total(); }

    // True when the user is too close to an antenna, scatterer or small cell.
    bool is_degenerate(Point2 user, double clearance) const;

private:
    Geometry geometry_;
    GscmParams params_;
    double k_linear_;
    std::vector<double> scatterer_to_array_;           // distance per scatterer
    std::vector<std::vector<Complex>> scatter_steering_;  // per scatterer, per antenna
    std::vector<Complex> scatter_to_cell_;             // [s * n_cells + j] leg gain
};

ChannelVector channel_to_array(Point2 user, const Geometry &geometry, const GscmParams &params);
ChannelVector channel_to_small_cells(Point2 user, const Geometry &geometry, const GscmParams &params);

// Index of the strongest entry; ties go to the lowest index.
std::size_t best_cell_label(const ChannelVector &h_u);

// CSV with columns kind,x,y for plotting the layout.
void write_geometry_csv(std::ostream &out, const Geometry &geometry, std::span<const Point2> users = {});

} // namespace chanlearn::gscm

#endif
