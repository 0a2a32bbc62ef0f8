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

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chanlearn::gscm {
namespace {

using testing::reference_geometry;

TEST(PlaceScatterers, ZeroCountGivesEmptyList)
{
    EXPECT_TRUE(place_scatterers(7, 0, reference_geometry(0, 4, 1)).empty());
}

TEST(PlaceScatterers, PointsLieInUpperHalfDisc)
{
    const auto pts = place_scatterers(7, 20, reference_geometry(0, 4, 1));
    ASSERT_EQ(pts.size(), 20u);
    for (const auto &p : pts) {
        EXPECT_LE(norm(p), 700.0);
        EXPECT_GE(p.y, 0.0);
    }
}

TEST(PlaceScatterers, DeterministicPerSeed)
{
    const auto g = reference_geometry(0, 4, 1);
    EXPECT_EQ(place_scatterers(7, 20, g), place_scatterers(7, 20, g));
    EXPECT_NE(place_scatterers(7, 20, g), place_scatterers(8, 20, g));
}

TEST(PlaceScatterers, NegativeCountRejected)
{
    EXPECT_THROW(place_scatterers(7, -1, reference_geometry(0, 4, 1)), std::invalid_argument);
}

TEST(SteeringVector, BroadsideIsAllOnes)
{
    const auto v = steering_vector(0.0, 4);
    ASSERT_EQ(v.size(), 4u);
    for (const auto &e : v.entries)
        EXPECT_EQ(e, Complex(1.0, 0.0));
}

TEST(SteeringVector, ThirtyDegreesTwoElements)
{
    const auto v = steering_vector(std::numbers::pi / 6.0, 2);
    EXPECT_NEAR(std::abs(v[0] - Complex(1.0, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[1] - std::polar(1.0, -std::numbers::pi / 2.0)), 0.0, 1e-15);
}

TEST(SteeringVector, NormIsSqrtN)
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double angle = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
        EXPECT_NEAR(std::sqrt(power(steering_vector(angle, 100))), 10.0, 1e-12);
    }
}

TEST(ChannelToArray, ScattererFreeEqualsLineOfSight)
{
    const auto g = reference_geometry(0, 32, 1);
    const ChannelModel model(g, {});
    const Point2 user{120.0, 340.0};
    const auto c = model.array_components(user);
    EXPECT_EQ(power(c.scattered), 0.0);

    // Independent LoS evaluation.
    const double d = norm(user);
    const double s = user.x / d;
    const auto h = channel_to_array(user, g, {});
    for (int k = 0; k < 32; ++k) {
        const Complex expect = (1.0 / d) * std::exp(Complex(0.0, -2.0 * std::numbers::pi * d / 0.15)) *
                               std::exp(Complex(0.0, -std::numbers::pi * k * s));
        EXPECT_NEAR(std::abs(h[static_cast<std::size_t>(k)] - expect), 0.0, 1e-11 / d);
    }
}

TEST(ChannelToArray, RicianRatioIsExact)
{
    const auto g = reference_geometry(20, 100, 11);
    const GscmParams params;
    const ChannelModel model(g, params);
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = model.array_components(sample_coverage_point(rng, g));
        const double ratio = power(c.los) / power(c.scattered);
        EXPECT_NEAR(ratio / 10.0, 1.0, 1e-9);
    }
}

TEST(ChannelToArray, RicianRatioFollowsConfiguredFactor)
{
    const auto g = reference_geometry(7, 8, 12);
    for (double k_db : {-3.0, 0.0, 6.0, 20.0}) {
        const ChannelModel model(g, {k_db, 2.0, 1.0});
        const auto c = model.array_components({-200.0, 100.0});
        EXPECT_NEAR(power(c.los) / power(c.scattered) / std::pow(10.0, k_db / 10.0), 1.0, 1e-9);
    }
}

TEST(ChannelToArray, DistinctUsersGiveDistinctChannels)
{
    const auto g = reference_geometry(20, 100, 13);
    const ChannelModel model(g, {});
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = sample_coverage_point(rng, g);
        const auto b = sample_coverage_point(rng, g);
        const auto ha = model.to_array(a);
        const auto hb = model.to_array(b);
        double d = 0.0;
        for (std::size_t k = 0; k < ha.size(); ++k)
            d += std::norm(ha[k] - hb[k]);
        EXPECT_GT(d, 0.0);
    }
}

TEST(ChannelToArray, DegenerateGeometryRejected)
{
    const auto g = reference_geometry(3, 8, 1);
    EXPECT_THROW(channel_to_array({0.0, 0.0}, g, {}), std::invalid_argument);
    EXPECT_THROW(channel_to_array(g.scatterers[1], g, {}), std::invalid_argument);
    EXPECT_THROW(channel_to_small_cells(g.small_cells[2], g, {}), std::invalid_argument);
}

TEST(ChannelToArray, DeterministicForSameGeometry)
{
    const auto a = channel_to_array({10.0, 500.0}, reference_geometry(20, 64, 4), {});
    const auto b = channel_to_array({10.0, 500.0}, reference_geometry(20, 64, 4), {});
    EXPECT_EQ(a.entries, b.entries);
}

TEST(ChannelToSmallCells, LengthMatchesCellCount)
{
    const auto h = channel_to_small_cells({50.0, 50.0}, reference_geometry(20, 4, 1), {});
    EXPECT_EQ(h.size(), 5u);
    EXPECT_EQ(h.role, ChannelRole::unobservable);
}

TEST(ChannelToSmallCells, ScattererFreeMagnitudeIsPathLoss)
{
    const auto g = reference_geometry(0, 4, 1);
    const Point2 user{-400.0, 120.0};
    const auto h = channel_to_small_cells(user, g, {});
    for (std::size_t j = 0; j < 5; ++j)
        EXPECT_NEAR(std::abs(h[j]), 1.0 / distance(user, g.small_cells[j]), 1e-15);
}

TEST(ChannelToSmallCells, RicianRatioHoldsPerCell)
{
    const auto g = reference_geometry(20, 4, 21);
    const ChannelModel model(g, {});
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = model.small_cell_components(sample_coverage_point(rng, g));
        for (std::size_t j = 0; j < c.los.size(); ++j)
            EXPECT_NEAR(std::norm(c.los[j]) / std::norm(c.scattered[j]) / 10.0, 1.0, 1e-9);
    }
}

TEST(ChannelToSmallCells, ScattererFreeMagnitudeDecreasesWithDistance)
{
    const auto g = reference_geometry(0, 4, 1);
    const Point2 cell = g.small_cells[2];
    double previous = std::numeric_limits<double>::infinity();
    for (double d = 0.5; d < 340.0; d *= 1.3) {
        const double mag = std::abs(channel_to_small_cells(cell + Point2{0.0, d}, g, {})[2]);
        EXPECT_LT(mag, previous);
        previous = mag;
    }
}

TEST(BestCellLabel, Examples)
{
    EXPECT_EQ(best_cell_label({{{1, 0}, {3, 0}, {2, 0}}}), 1u);
    EXPECT_EQ(best_cell_label({{{2, 0}, {0, 2}}}), 0u);
    EXPECT_THROW(best_cell_label({}), std::invalid_argument);
}

TEST(BestCellLabel, MatchesExhaustiveScanAndIgnoresPositiveScaling)
{
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto h = testing::random_channel(rng, 5);
        std::size_t expect = 0;
        for (std::size_t j = 0; j < h.size(); ++j)
            if (std::abs(h[j]) > std::abs(h[expect]))
                expect = j;
        EXPECT_EQ(best_cell_label(h), expect);

        ChannelVector scaled = h;
        const double c = std::exp(rng.uniform(-5.0, 5.0));
        for (auto &v : scaled.entries)
            v *= c;
        EXPECT_EQ(best_cell_label(scaled), expect);
    }
}

TEST(Geometry, InvariantViolationsRejected)
{
    auto g = reference_geometry(2, 4, 1);
    g.antenna_spacing = 0.1;
    EXPECT_THROW(g.validate(), std::invalid_argument);

    g = reference_geometry(2, 4, 1);
    g.small_cells[1] = g.small_cells[0];
    EXPECT_THROW(g.validate(), std::invalid_argument);

    g = reference_geometry(2, 4, 1);
    g.scatterers[0] = {0.0, -10.0};
    EXPECT_THROW(g.validate(), std::invalid_argument);

    g = reference_geometry(2, 4, 1);
    g.reflection.pop_back();
    EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(GscmParams, InvalidValuesRejected)
{
    EXPECT_THROW((GscmParams{std::nan(""), 2.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((GscmParams{10.0, -1.0, 1.0}.validate()), std::invalid_argument);
}

TEST(ReflectionCoefficients, UnitMeanPower)
{
    const auto g = draw_reflection_coefficients(3, 20000);
    double p = 0.0;
    for (const auto &v : g)
        p += std::norm(v);
    EXPECT_NEAR(p / 20000.0, 1.0, 0.03);
}

TEST(GeometryCsv, ListsEveryElement)
{
    const auto g = reference_geometry(3, 4, 1);
    const Point2 users[] = {{1.0, 2.0}};
    std::ostringstream out;
    write_geometry_csv(out, g, users);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "kind,x,y");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, 3 + 5 + 4 + 1);
}

} // namespace
} // namespace chanlearn::gscm
