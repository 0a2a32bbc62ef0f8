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

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace chanlearn {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail(std::string_view context, std::string_view key, std::string_view what)
{
    throw ScenarioError(fmt::format("{}: {}: {}", context, key, what));
}

template <typename T>
T parse_number(std::string_view text, std::string_view context, std::string_view key)
{
    T value{};
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        fail(context, key, fmt::format("cannot parse '{}'", text));
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value))
            fail(context, key, "value must be finite");
    return value;
}

bool parse_bool(std::string_view text, std::string_view context, std::string_view key)
{
    const auto t = trim(text);
    if (t == "true" || t == "1")
        return true;
    if (t == "false" || t == "0")
        return false;
    fail(context, key, fmt::format("expected true/false, got '{}'", text));
}

std::vector<int> parse_int_list(std::string_view text, std::string_view context, std::string_view key)
{
    std::vector<int> out;
    for (auto item : split(text, ','))
        out.push_back(parse_number<int>(item, context, key));
    return out;
}

std::vector<Point2> parse_points(std::string_view text, std::string_view context, std::string_view key)
{
    std::vector<Point2> out;
    if (trim(text).empty())
        return out;
    for (auto item : split(text, ';')) {
        const auto xy = split(item, ',');
        if (xy.size() != 2)
            fail(context, key, fmt::format("expected 'x,y', got '{}'", item));
        out.push_back({parse_number<double>(xy[0], context, key), parse_number<double>(xy[1], context, key)});
    }
    return out;
}

struct Field {
    std::string_view key;
    std::function<void(Scenario &, std::string_view, std::string_view)> set;
    std::function<std::string(const Scenario &)> get;
};

template <typename T>
Field number_field(std::string_view key, T Scenario::*member)
{
    return {key,
            [key, member](Scenario &s, std::string_view v, std::string_view ctx) {
                s.*member = parse_number<T>(v, ctx, key);
            },
            [member](const Scenario &s) { return fmt::format("{}", s.*member); }};
}

Field int_list_field(std::string_view key, std::vector<int> Scenario::*member)
{
    return {key,
            [key, member](Scenario &s, std::string_view v, std::string_view ctx) {
                s.*member = parse_int_list(v, ctx, key);
            },
            [member](const Scenario &s) { return fmt::format("{}", fmt::join(s.*member, ",")); }};
}

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = {
        number_field("radius_m", &Scenario::radius_m),
        number_field("n_antennas", &Scenario::n_antennas),
        number_field("n_scatterers", &Scenario::n_scatterers),
        number_field("n_small_cells", &Scenario::n_small_cells),
        {"small_cells",
         [](Scenario &s, std::string_view v, std::string_view ctx) { s.small_cells = parse_points(v, ctx, "small_cells"); },
         [](const Scenario &s) {
             std::vector<std::string> parts;
             for (const auto &p : s.small_cells)
                 parts.push_back(fmt::format("{},{}", p.x, p.y));
             return fmt::format("{}", fmt::join(parts, ";"));
         }},
        number_field("small_cell_ring_m", &Scenario::small_cell_ring_m),
        number_field("rician_k_db", &Scenario::rician_k_db),
        number_field("pathloss_exponent", &Scenario::pathloss_exponent),
        number_field("reference_distance_m", &Scenario::reference_distance_m),
        number_field("wavelength_m", &Scenario::wavelength_m),
        number_field("quant_levels", &Scenario::quant_levels),
        number_field("lloyd_max_iters", &Scenario::lloyd_max_iters),
        number_field("lloyd_tol", &Scenario::lloyd_tol),
        number_field("hidden_units", &Scenario::hidden_units),
        number_field("lambda_reg", &Scenario::lambda_reg),
        {"reg_include_bias",
         [](Scenario &s, std::string_view v, std::string_view ctx) {
             s.reg_include_bias = parse_bool(v, ctx, "reg_include_bias");
         },
         [](const Scenario &s) { return std::string(s.reg_include_bias ? "true" : "false"); }},
        number_field("max_iters", &Scenario::max_iters),
        number_field("grad_tol", &Scenario::grad_tol),
        number_field("cost_tol", &Scenario::cost_tol),
        number_field("n_users", &Scenario::n_users),
        number_field("n_runs", &Scenario::n_runs),
        number_field("train_fraction", &Scenario::train_fraction),
        int_list_field("knn_k_list", &Scenario::knn_k_list),
        number_field("master_seed", &Scenario::master_seed),
        number_field("jobs", &Scenario::jobs),
        int_list_field("sweep_antennas", &Scenario::sweep_antennas),
        int_list_field("sweep_scatterers", &Scenario::sweep_scatterers),
        number_field("distance_pairs", &Scenario::distance_pairs),
    };
    return table;
}

void require(bool ok, std::string_view key, std::string_view what)
{
    if (!ok)
        throw ScenarioError(fmt::format("scenario: {}: {}", key, what));
}

} // namespace

std::vector<Point2> Scenario::cell_positions() const
{
    if (!small_cells.empty())
        return small_cells;
    // Polar angles 180*(j+1)/(n+1) degrees from the array axis.
    std::vector<Point2> out;
    for (int j = 0; j < n_small_cells; ++j) {
        const double phi = std::numbers::pi * (j + 1) / (n_small_cells + 1);
        out.push_back({small_cell_ring_m * std::cos(phi), small_cell_ring_m * std::sin(phi)});
    }
    return out;
}

void Scenario::validate() const
{
    require(radius_m > 0.0, "radius_m", "must be positive");
    require(n_antennas >= 1, "n_antennas", "must be at least 1");
    require(n_scatterers >= 0, "n_scatterers", "must be non-negative");
    require(n_small_cells >= 1, "n_small_cells", "must be at least 1");
    require(small_cells.empty() || small_cells.size() == static_cast<std::size_t>(n_small_cells), "small_cells",
            fmt::format("lists {} cells but n_small_cells is {}", small_cells.size(), n_small_cells));
    require(small_cell_ring_m > 0.0 && small_cell_ring_m <= radius_m, "small_cell_ring_m", "must be in (0, radius_m]");
    for (const auto &p : cell_positions())
        require(std::hypot(p.x, p.y) <= radius_m && p.y >= 0.0, "small_cells", "cells must lie in the upper half-disc");
    require(pathloss_exponent >= 0.0, "pathloss_exponent", "must be non-negative");
    require(reference_distance_m > 0.0, "reference_distance_m", "must be positive");
    require(wavelength_m > 0.0, "wavelength_m", "must be positive");
    require(quant_levels >= 2, "quant_levels", "must be at least 2");
    require(lloyd_max_iters >= 0, "lloyd_max_iters", "must be non-negative");
    require(lloyd_tol >= 0.0, "lloyd_tol", "must be non-negative");
    require(hidden_units >= 1, "hidden_units", "must be at least 1");
    require(lambda_reg >= 0.0, "lambda_reg", "must be non-negative");
    require(max_iters >= 0, "max_iters", "must be non-negative");
    require(grad_tol >= 0.0, "grad_tol", "must be non-negative");
    require(cost_tol >= 0.0, "cost_tol", "must be non-negative");
    require(n_users >= 2, "n_users", "must be at least 2");
    require(n_runs >= 1, "n_runs", "must be at least 1");
    require(train_fraction > 0.0 && train_fraction < 1.0, "train_fraction", "must be in (0, 1)");
    require(!knn_k_list.empty(), "knn_k_list", "must not be empty");
    const auto n_train = std::clamp(static_cast<long>(std::lround(train_fraction * n_users)), 1L, long{n_users} - 1);
    for (int k : knn_k_list)
        require(k >= 1 && k <= n_train, "knn_k_list", fmt::format("k={} outside [1, {}]", k, n_train));
    require(jobs >= 1, "jobs", "must be at least 1");
    for (int a : sweep_antennas)
        require(a >= 1, "sweep_antennas", "entries must be positive");
    for (int s : sweep_scatterers)
        require(s >= 0, "sweep_scatterers", "entries must be non-negative");
    require(distance_pairs >= 1, "distance_pairs", "must be at least 1");
}

void apply_setting(Scenario &scenario, std::string_view key, std::string_view value, std::string_view context)
{
    const auto &table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field &f) { return f.key == key; });
    if (it == table.end())
        throw ScenarioError(fmt::format("{}: unknown key '{}'", context, key));
    it->set(scenario, value, context);
}

Scenario parse_scenario(std::istream &in, std::string_view source_name, Scenario base)
{
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto context = fmt::format("{}:{}", source_name, line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ScenarioError(fmt::format("{}: expected key=value, got '{}'", context, line));
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), context);
    }
    return base;
}

void apply_overrides(Scenario &scenario, std::span<const std::string> overrides)
{
    for (const auto &o : overrides) {
        const auto context = fmt::format("--set {}", o);
        const auto eq = o.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(fmt::format("{}: expected KEY=VALUE", context));
        const std::string_view view = o;
        apply_setting(scenario, trim(view.substr(0, eq)), trim(view.substr(eq + 1)), context);
    }
    scenario.validate();
}

Scenario load_scenario(const std::filesystem::path &path, std::span<const std::string> overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(fmt::format("cannot open scenario file '{}'", path.string()));
    Scenario s = parse_scenario(in, path.string());
    apply_overrides(s, overrides);
    return s;
}

void write_scenario(std::ostream &out, const Scenario &scenario)
{
    for (const auto &f : fields())
        fmt::print(out, "{}={}\n", f.key, f.get(scenario));
}

std::vector<std::string> scenario_keys()
{
    std::vector<std::string> out;
    for (const auto &f : fields())
        out.emplace_back(f.key);
    return out;
}

} // namespace chanlearn
