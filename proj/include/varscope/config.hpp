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

namespace varscope {

/// Resolved key/value configuration from a properties file. Relative paths in
/// path-valued keys resolve against the config file's directory.
struct Config {
    std::map<std::string, std::string> values;
    std::vector<std::string> warnings;  // unknown keys, duplicate overrides
    std::filesystem::path base_dir = ".";

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = {}) const;
    bool get_bool(const std::string& key, bool fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::filesystem::path get_path(const std::string& key) const;
    std::filesystem::path get_path(const std::string& key,
                                   const std::filesystem::path& fallback) const;

    /// sha256 over the sorted resolved "key = value" lines; the identity of
    /// an experiment setup.
    std::string fingerprint() const;
    /// Canonical properties text (sorted keys), e.g. for archiving.
    std::string canonical_text() const;
};

/// Parses properties syntax: `key = value`, '#' comments, blank lines; later
/// duplicates override earlier ones with a warning. Performs per-key
/// validation; unknown keys produce warnings, never silent drops.
Config load_config(const std::string& text, const std::filesystem::path& base_dir);
Config load_config_file(const std::filesystem::path& path);

/// Applies CLI `key=value` overrides on top of the file values, then
/// re-validates. A conflicting key resolves to the override with a warning.
void apply_overrides(Config& config, const std::vector<std::string>& overrides);

/// Checks the presence of source_tree, output_dir and exactly one of
/// analysis.preset / analysis.pipeline.
void check_required(const Config& config);

}  // namespace varscope
