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

#ifndef CHANLEARN_TOOLS_CLI_HPP
#define CHANLEARN_TOOLS_CLI_HPP

#include "chanlearn/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chanlearn::cli {

struct CliConfig {
    std::string subcommand;
    std::filesystem::path scenario_path;
    std::filesystem::path output_dir = ".";
    std::vector<std::string> overrides;
    std::optional<int> jobs;
    std::filesystem::path model_dir;   // predict: where model.txt and codebook.csv live
    std::filesystem::path input_csv;   // predict: raw array responses
};

// Scenario file plus --set overrides plus --jobs.
Scenario resolve_scenario(const CliConfig &config);

int cmd_compare(const CliConfig &config, std::ostream &out);
int cmd_sweep(const CliConfig &config, std::ostream &out);
int cmd_distance(const CliConfig &config, std::ostream &out);
int cmd_train(const CliConfig &config, std::ostream &out);
int cmd_predict(const CliConfig &config, std::ostream &out);

// Parses argv and dispatches. Errors are reported on `err` as one line and
// yield a nonzero exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace chanlearn::cli

#endif
