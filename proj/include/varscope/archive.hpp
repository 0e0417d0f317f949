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
#include <string>
#include <vector>

#include "varscope/config.hpp"
#include "varscope/log.hpp"

namespace varscope {

/// Reproduction archive layout (a standard zip):
///   manifest.json      tool version, config fingerprint, per-file hashes,
///                      creation timestamp (the only nondeterministic bytes)
///   config.properties  the resolved configuration
///   input/             source tree copy (archive.include_sources, default on)
///   cache/             extractor caches written by the run
///   results/           the run's result tables
///   run_report.json, run.log
///
/// Unpacking plus a rerun with <kind>.cache.read = true and
/// cache.ignore_fingerprint = true reproduces results/ byte-identically.
struct ArchiveInputs {
    std::filesystem::path output_dir;
    std::filesystem::path cache_dir;
    std::filesystem::path source_tree;
    std::vector<std::string> result_files;  // names relative to output_dir
    bool include_sources = true;
    bool overwrite = false;
};

void archive_run(const std::filesystem::path& archive_path, const Config& config,
                 const ArchiveInputs& inputs, Logger& logger);

/// Verifies every manifest hash (and that the entry sets agree) and extracts
/// into dest_dir. Any tampered byte fails the run.
void unpack_archive(const std::filesystem::path& archive_path,
                    const std::filesystem::path& dest_dir);

}  // namespace varscope
