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

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "varscope/config.hpp"
#include "varscope/log.hpp"
#include "varscope/result_table.hpp"

namespace varscope {

struct ComponentTiming {
    std::string name;
    double wall_ms = 0;
    int64_t items = 0;
};

/// What a run did: invocation counters prove whether extractors executed
/// (cache reads leave them at zero), output files list what was written.
/// Timing fields vary between runs; result files never do.
struct RunReport {
    std::string tool_version;
    std::string config_fingerprint;
    int jobs = 1;
    bool sequential = false;
    std::string status = "ok";
    std::string failed_component;
    std::string error;
    int64_t code_extractions = 0;
    int64_t build_extractions = 0;
    int64_t vm_extractions = 0;
    double total_ms = 0;
    std::vector<ComponentTiming> components;
    std::map<std::string, std::vector<std::string>> diagnostics;
    std::vector<std::string> output_files;  // relative to output_dir

    std::string to_json() const;
};

RunReport parse_run_report(const std::string& json_text);

/// Executes the configured extractor pipelines and analysis graph: writes the
/// sink's table (plus any analysis.output.intermediate_results) into
/// output_dir, always run_report.json and run.log, optionally the
/// reproduction archive. On failure partial outputs are removed unless
/// output.keep_partial = true, run_report.json names the failing component,
/// and the error is rethrown for the CLI exit code.
RunReport run(const Config& config, Logger& logger);

/// Serializes one table: CSV (RFC 4180, LF) or JSON. IO errors carry the
/// path.
void write_table(const ResultTable& table, const std::string& format,
                 const std::filesystem::path& path);

}  // namespace varscope
