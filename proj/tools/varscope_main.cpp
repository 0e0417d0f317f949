// Copyright 2026 the varscope authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "varscope/archive.hpp"
#include "varscope/cache.hpp"
#include "varscope/config.hpp"
#include "varscope/error.hpp"
#include "varscope/log.hpp"
#include "varscope/pipeline.hpp"
#include "varscope/runner.hpp"
#include "varscope/version.hpp"

namespace {

constexpr int kUsageExit = 64;

struct CommonFlags {
    std::vector<std::string> overrides;
    int jobs = 0;
    bool archive = false;
    std::string log_level;
    std::string output_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("-D,--define", flags.overrides,
                    "Override a configuration key (key=value, repeatable)");
    cmd->add_option("--jobs", flags.jobs, "Worker count, same as jobs = N in the file");
    cmd->add_flag("--archive", flags.archive, "Write the reproduction archive after the run");
    cmd->add_option("--log-level", flags.log_level, "error|warn|info|debug");
    cmd->add_option("--output-dir", flags.output_dir, "Override output_dir");
}

varscope::Config load_with_flags(const std::string& config_path, const CommonFlags& flags) {
    varscope::Config config = varscope::load_config_file(config_path);
    std::vector<std::string> overrides = flags.overrides;
    if (flags.jobs > 0) overrides.push_back("jobs=" + std::to_string(flags.jobs));
    if (flags.archive) overrides.push_back("archive=true");
    if (!flags.log_level.empty()) overrides.push_back("log.level=" + flags.log_level);
    if (!flags.output_dir.empty()) overrides.push_back("output_dir=" + flags.output_dir);
    varscope::apply_overrides(config, overrides);
    return config;
}

int exit_code_for(const varscope::Error& e) { return static_cast<int>(e.category()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(varscope::kToolName) +
                 " - variability analysis workbench for C-preprocessor product lines"};
    app.set_version_flag("--version", std::string(varscope::kToolVersion));
    app.require_subcommand(1);

    std::string config_path, cache_dir, archive_path, dest_dir;
    CommonFlags run_flags, validate_flags;

    CLI::App* cmd_run = app.add_subcommand("run", "Execute the configured pipelines");
    cmd_run->add_option("config", config_path, "Configuration properties file")->required();
    add_common_flags(cmd_run, run_flags);

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "Load the config and print the resolved pipeline");
    cmd_validate->add_option("config", config_path, "Configuration properties file")->required();
    add_common_flags(cmd_validate, validate_flags);

    CLI::App* cmd_inspect = app.add_subcommand("inspect-cache", "Summarize a cache directory");
    cmd_inspect->add_option("dir", cache_dir, "Cache directory")->required();

    CLI::App* cmd_unpack =
        app.add_subcommand("unpack", "Verify and extract a reproduction archive");
    cmd_unpack->add_option("archive", archive_path, "Archive file")->required();
    cmd_unpack->add_option("dir", dest_dir, "Destination directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageExit;
    }

    varscope::Logger logger;

    try {
        if (cmd_run->parsed()) {
            varscope::Config config = load_with_flags(config_path, run_flags);
            varscope::RunReport report = varscope::run(config, logger);
            std::cout << "ok: " << report.output_files.size() << " result file(s) in "
                      << config.get("output_dir") << "\n";
            return 0;
        }
        if (cmd_validate->parsed()) {
            varscope::Config config = load_with_flags(config_path, validate_flags);
            varscope::check_required(config);
            varscope::PipelineGraph graph = varscope::build_pipeline(config);
            for (const auto& warning : config.warnings)
                std::cerr << "[warn] " << warning << "\n";
            std::cout << varscope::describe_graph(graph);
            std::cout << "config fingerprint: " << config.fingerprint() << "\n";
            return 0;
        }
        if (cmd_inspect->parsed()) {
            std::cout << varscope::describe_cache(cache_dir);
            return 0;
        }
        if (cmd_unpack->parsed()) {
            varscope::unpack_archive(archive_path, dest_dir);
            std::cout << "verified and unpacked to " << dest_dir << "\n";
            return 0;
        }
    } catch (const varscope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsageExit;
}
