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

#include "chanlearn/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace chanlearn {
namespace {

Scenario parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_scenario(in, "test.scenario");
}

std::string error_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const ScenarioError &e) {
        return e.what();
    }
    return {};
}

TEST(ParseScenario, ReadsKeyValuePairs)
{
    const auto s = parse("# comment\nradius_m = 700\nn_small_cells=5\n\nrician_k_db=10  # trailing\n"
                         "knn_k_list=1, 3,7\nsmall_cells=10,20; -30,40; 0,5; 1,1; 2,2\n");
    EXPECT_EQ(s.radius_m, 700.0);
    EXPECT_EQ(s.n_small_cells, 5);
    EXPECT_EQ(s.rician_k_db, 10.0);
    EXPECT_EQ(s.knn_k_list, (std::vector<int>{1, 3, 7}));
    ASSERT_EQ(s.small_cells.size(), 5u);
    EXPECT_EQ(s.small_cells[1], (Point2{-30.0, 40.0}));
}

TEST(ParseScenario, UnknownKeyNamedWithLine)
{
    const auto msg = error_of([] { parse("radius_m=700\nfoo=1\n"); });
    EXPECT_NE(msg.find("'foo'"), std::string::npos);
    EXPECT_NE(msg.find("test.scenario:2"), std::string::npos);
}

TEST(ParseScenario, MalformedValuesRejected)
{
    EXPECT_NE(error_of([] { parse("n_antennas=abc\n"); }).find("n_antennas"), std::string::npos);
    EXPECT_NE(error_of([] { parse("n_antennas=12x\n"); }).find("n_antennas"), std::string::npos);
    EXPECT_FALSE(error_of([] { parse("just text\n"); }).empty());
    EXPECT_FALSE(error_of([] { parse("reg_include_bias=maybe\n"); }).empty());
}

TEST(Validate, OutOfRangeValuesNamed)
{
    EXPECT_NE(error_of([] { parse("train_fraction=1.5\n").validate(); }).find("train_fraction"), std::string::npos);
    EXPECT_NE(error_of([] { parse("n_users=1\n").validate(); }).find("n_users"), std::string::npos);
    EXPECT_NE(error_of([] { parse("quant_levels=1\n").validate(); }).find("quant_levels"), std::string::npos);
    EXPECT_NE(error_of([] { parse("n_small_cells=3\nsmall_cells=1,1;2,2\n").validate(); }).find("small_cells"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse("knn_k_list=0\n").validate(); }).find("knn_k_list"), std::string::npos);
    EXPECT_NO_THROW(Scenario{}.validate());
}

TEST(Overrides, TakePrecedenceOverFile)
{
    const auto path = std::filesystem::temp_directory_path() / "chanlearn_override.scenario";
    std::ofstream(path) << "n_antennas=100\nn_scatterers=20\n";
    const std::string ov[] = {"n_antennas=64"};
    const auto s = load_scenario(path, ov);
    EXPECT_EQ(s.n_antennas, 64);
    EXPECT_EQ(s.n_scatterers, 20);

    const std::string bad[] = {"foo=1"};
    EXPECT_NE(error_of([&] { load_scenario(path, bad); }).find("'foo'"), std::string::npos);
    const std::string no_eq[] = {"n_antennas"};
    EXPECT_FALSE(error_of([&] { load_scenario(path, no_eq); }).empty());
    std::filesystem::remove(path);
}

TEST(LoadScenario, MissingFileReported)
{
    EXPECT_NE(error_of([] { load_scenario("/nonexistent/x.scenario"); }).find("x.scenario"), std::string::npos);
}

TEST(WriteScenario, RoundTripsEveryKey)
{
    Scenario s;
    s.n_antennas = 33;
    s.lambda_reg = 0.1 + 0.2;
    s.small_cells = {{1.5, 2.5}, {-3.0, 4.0}, {5, 6}, {7, 8}, {9, 10}};
    s.master_seed = 18446744073709551615ull;
    s.reg_include_bias = true;
    std::stringstream buf;
    write_scenario(buf, s);
    const auto back = parse_scenario(buf, "round-trip");
    std::stringstream again;
    write_scenario(again, back);
    EXPECT_EQ(buf.str(), again.str());
    EXPECT_EQ(back.lambda_reg, s.lambda_reg);
    EXPECT_EQ(back.master_seed, s.master_seed);
    EXPECT_EQ(back.small_cells, s.small_cells);
    for (const auto &key : scenario_keys())
        EXPECT_NE(buf.str().find(key + "="), std::string::npos) << key;
}

TEST(CellPositions, DefaultRing)
{
    Scenario s;
    const auto cells = s.cell_positions();
    ASSERT_EQ(cells.size(), 5u);
    for (const auto &c : cells) {
        EXPECT_NEAR(std::hypot(c.x, c.y), 350.0, 1e-9);
        EXPECT_GT(c.y, 0.0);
    }
    EXPECT_NEAR(cells[2].x, 0.0, 1e-9);
}

} // namespace
} // namespace chanlearn
