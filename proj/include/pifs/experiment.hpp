/*
   Copyright 2026 The pifs-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "pifs/config.hpp"

namespace pifs {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    /// Overrides experiment.kind when set.
    std::optional<RunKind> kind;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    /// Base output directory; artifacts land in <base>/<experiment name>.
    std::optional<std::string> out_dir;
};

struct RunResult {
    int exit_code = 0;
    /// Name of the failed stage when exit_code == 1.
    std::string stage;
    std::string message;
    std::filesystem::path out_dir;
    /// File name to contents, in write order.
    std::map<std::string, std::string> artifacts;
    std::string summary;
};

/// Resolves the base output directory: the explicit option, then
/// output.dir, then $PIFS_LAB_OUT, then "pifs-lab-out".
std::filesystem::path resolve_output_base(const ExperimentConfig& cfg, const RunOptions& opt);

/// Runs the experiment and writes every artifact plus manifest.json.
/// Exit code 0 on success and 1 on a compute failure. Requirement
/// violations of the run kind raise ConfigError before any compute.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

/// Loads, checks and runs a config file; maps schema errors to exit 2 and
/// prints diagnostics to stderr and the summary to stdout.
int run_config_file(const std::string& path, const RunOptions& opt);

} // namespace pifs
