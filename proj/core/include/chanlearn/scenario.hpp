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

#ifndef CHANLEARN_SCENARIO_HPP
#define CHANLEARN_SCENARIO_HPP

#include "chanlearn/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chanlearn {

// Full experiment configuration. Defaults are the reference setting: a 700 m
// half-disc, a 100-element array, 20 scatterers, 5 small cells, K = 10 dB,
// 2000 users per run split in half, 50 runs.
struct Scenario {
    // geometry
    double radius_m = 700.0;
    int n_antennas = 100;
    int n_scatterers = 20;
    int n_small_cells = 5;
    // Explicit small-cell coordinates relative to the array; when empty the
    // cells sit on a ring at `small_cell_ring_m`, evenly spread in angle.
    std::vector<Point2> small_cells;
    double small_cell_ring_m = 350.0;

    // propagation
    double rician_k_db = 10.0;
    double pathloss_exponent = 2.0;
    double reference_distance_m = 1.0;
    double wavelength_m = 0.15;

    // learning
    int quant_levels = 16;
    int lloyd_max_iters = 100;
    double lloyd_tol = 1e-9;
    int hidden_units = 50;
    double lambda_reg = 1e-4;
    bool reg_include_bias = false;
    int max_iters = 200;
    double grad_tol = 1e-5;
    double cost_tol = 1e-9;

    // experiment
    int n_users = 2000;
    int n_runs = 50;
    double train_fraction = 0.5;
    std::vector<int> knn_k_list{1, 5, 10, 25};
    std::uint64_t master_seed = 20150716;
    int jobs = 1;
    std::vector<int> sweep_antennas{50, 100};
    std::vector<int> sweep_scatterers{20, 100};
    int distance_pairs = 2000;

    // Resolved small-cell positions (explicit list or the default ring).
    std::vector<Point2> cell_positions() const;
    // Throws ScenarioError naming the offending key.
    void validate() const;
};

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sets one key from its text value. `context` prefixes error messages.
void apply_setting(Scenario &scenario, std::string_view key, std::string_view value, std::string_view context);

// Line-oriented key=value text; '#' starts a comment.
Scenario parse_scenario(std::istream &in, std::string_view source_name, Scenario base = {});

// Reads `path`, then applies each KEY=VALUE override in order, then validates.
Scenario load_scenario(const std::filesystem::path &path, std::span<const std::string> overrides = {});

// Applies KEY=VALUE overrides to an existing scenario and validates.
void apply_overrides(Scenario &scenario, std::span<const std::string> overrides);

// Writes every key in a form parse_scenario reads back.
void write_scenario(std::ostream &out, const Scenario &scenario);

std::vector<std::string> scenario_keys();

} // namespace chanlearn

#endif
