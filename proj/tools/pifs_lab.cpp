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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "pifs/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pifs-lab: numerical laboratory for parabolic iterated function systems"};
    app.set_version_flag("--version", std::string(pifs::kVersion));
    app.require_subcommand(1, 1);

    std::string config;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string out;

    struct Sub {
        const char* name;
        const char* help;
        std::optional<pifs::RunKind> kind;
    };
    const Sub subs[] = {
        {"run", "Run the kind declared in the config", std::nullopt},
        {"sweep", "Dimension map over the parameter grid", pifs::RunKind::Sweep},
        {"validate", "Check the system's structural conditions", pifs::RunKind::Validate},
        {"attractor", "Sample the attractor and fit empirical dimensions", pifs::RunKind::Attractor},
        {"transversality", "Heuristic transversality constants", pifs::RunKind::Transversality},
    };
    std::vector<std::pair<CLI::App*, std::optional<pifs::RunKind>>> commands;
    std::vector<CLI::Option*> seed_opts;
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        cmd->add_option("--config", config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--jobs", jobs, "Worker threads; never changes output bytes")->check(CLI::PositiveNumber);
        seed_opts.push_back(cmd->add_option("--seed", seed, "Master seed, overrides experiment.seed"));
        cmd->add_option("--out", out, "Base output directory (default: $PIFS_LAB_OUT)");
        commands.emplace_back(cmd, s.kind);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    pifs::RunOptions opt;
    opt.jobs = jobs;
    if (!out.empty()) opt.out_dir = out;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        if (!commands[k].first->parsed()) continue;
        opt.kind = commands[k].second;
        if (seed_opts[k]->count() > 0) opt.seed = seed;
    }
    try {
        return pifs::run_config_file(config, opt);
    } catch (const std::exception& e) {
        std::cerr << "pifs-lab: " << e.what() << '\n';
        return 1;
    }
}
