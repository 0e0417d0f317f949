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

#include "varscope/build_extractor.hpp"
#include "varscope/code_model.hpp"
#include "varscope/varmodel.hpp"

namespace varscope {

/// Bumped on any cache schema change; readers reject other versions.
inline constexpr int kCacheFormatVersion = 1;

/// Cache layout under the cache directory:
///   code/<path-with-__-separators>.json   one document per source file
///   build.json
///   vm.json
/// Documents are human-readable JSON with formulas in their text rendering,
/// stable key order and LF endings, so cached runs diff cleanly.

std::filesystem::path code_cache_path(const std::filesystem::path& cache_dir,
                                      const std::string& rel_path);

/// (path, sha256-of-content) of one input file set member.
using FileHash = std::pair<std::string, std::string>;

std::string serialize_code_model(const CodeModel& model, const std::string& source_fingerprint);
CodeModel deserialize_code_model(const std::string& text, std::string* fingerprint_out = nullptr);

void write_code_cache(const CodeModel& model, const std::filesystem::path& cache_dir,
                      const std::string& source_fingerprint);

/// Loads every cached code model. With `expected` non-null the cached set
/// must cover exactly those files with matching per-file fingerprints;
/// with nullptr (cache.ignore_fingerprint) everything present is loaded.
/// Errors: MissingCache, VersionMismatch, FingerprintMismatch.
std::vector<CodeModel> read_code_cache(const std::filesystem::path& cache_dir,
                                       const std::vector<FileHash>* expected);

void write_build_cache(const BuildModel& model, const std::filesystem::path& cache_dir,
                       const std::string& source_fingerprint);
BuildModel read_build_cache(const std::filesystem::path& cache_dir,
                            std::string* fingerprint_out = nullptr);

void write_vm_cache(const VariabilityModel& model, const std::filesystem::path& cache_dir,
                    const std::string& source_fingerprint);
VariabilityModel read_vm_cache(const std::filesystem::path& cache_dir,
                               std::string* fingerprint_out = nullptr);

/// Human-oriented summary of a cache directory (versions, entry counts,
/// fingerprints); what `varscope inspect-cache` prints.
std::string describe_cache(const std::filesystem::path& cache_dir);

}  // namespace varscope
