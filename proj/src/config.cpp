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

#include "varscope/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "varscope/error.hpp"
#include "varscope/hashing.hpp"
#include "varscope/log.hpp"

namespace varscope {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "source_tree", "output_dir", "jobs", "archive",
        "analysis.preset", "analysis.pipeline", "analysis.output.intermediate_results",
        "output.format", "output.keep_partial",
        "code.extractor", "code.file_patterns", "code.cache.write", "code.cache.read",
        "build.extractor", "build.tristate", "build.missing_file_pc",
        "build.cache.write", "build.cache.read",
        "vm.extractor", "vm.files", "vm.allow_undeclared", "vm.cache.write", "vm.cache.read",
        "variability.prefix",
        "cache.dir", "cache.ignore_fingerprint",
        "archive.path", "archive.include_sources", "archive.overwrite",
        "log.level",
        "pipeline.buffer", "pipeline.sequential",
    };
    return keys;
}

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

[[noreturn]] void invalid(const std::string& key, const std::string& reason) {
    throw Error(ErrorCategory::Config, "InvalidValue", "key '" + key + "': " + reason);
}

void parse_bool(const std::string& key, const std::string& value) {
    if (value != "true" && value != "false") invalid(key, "expected true or false");
}

void validate_key(const std::string& key, const std::string& value,
                  std::vector<std::string>& warnings) {
    if (!known_keys().count(key)) {
        warnings.push_back("unknown configuration key '" + key + "' is ignored");
        return;
    }
    if (key == "jobs" || key == "pipeline.buffer") {
        try {
            if (std::stoi(value) < 1) invalid(key, "expected a positive integer");
        } catch (const std::logic_error&) {
            invalid(key, "expected a positive integer");
        }
    } else if (key == "output.format") {
        if (value != "csv" && value != "json") invalid(key, "expected csv or json");
    } else if (key == "analysis.preset") {
        if (value != "feature_effects" && value != "dead_blocks" && value != "metrics")
            invalid(key, "expected feature_effects, dead_blocks or metrics");
    } else if (key == "log.level") {
        parse_log_level(value);  // throws InvalidValue
    } else if (key == "code.extractor") {
        if (value != "cpp") invalid(key, "the only registered code extractor is 'cpp'");
    } else if (key == "build.extractor") {
        if (value != "kbuild") invalid(key, "the only registered build extractor is 'kbuild'");
    } else if (key == "vm.extractor") {
        if (value != "kconfig") invalid(key, "the only registered variability-model extractor is 'kconfig'");
    } else if (key.ends_with(".cache.write") || key.ends_with(".cache.read") ||
               key == "output.keep_partial" || key == "build.tristate" ||
               key == "build.missing_file_pc" || key == "vm.allow_undeclared" ||
               key == "cache.ignore_fingerprint" || key == "archive" ||
               key == "archive.include_sources" || key == "archive.overwrite" ||
               key == "pipeline.sequential") {
        parse_bool(key, value);
    }
}

}  // namespace

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    return it->second == "true";
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    return std::stoi(it->second);
}

std::filesystem::path Config::get_path(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end())
        throw Error(ErrorCategory::Config, "MissingRequired", "key '" + key + "' is required");
    std::filesystem::path p = it->second;
    return p.is_absolute() ? p : base_dir / p;
}

std::filesystem::path Config::get_path(const std::string& key,
                                       const std::filesystem::path& fallback) const {
    if (!has(key)) return fallback;
    return get_path(key);
}

std::string Config::canonical_text() const {
    std::string text;
    for (const auto& [key, value] : values) text += key + " = " + value + "\n";
    return text;
}

std::string Config::fingerprint() const {
    return sha256_hex(canonical_text());
}

Config load_config(const std::string& text, const std::filesystem::path& base_dir) {
    Config config;
    config.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = trim_copy(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCategory::Config, "SyntaxError",
                        "expected 'key = value', got '" + trimmed + "'", {}, line_no);
        std::string key = trim_copy(trimmed.substr(0, eq));
        std::string value = trim_copy(trimmed.substr(eq + 1));
        if (key.empty())
            throw Error(ErrorCategory::Config, "SyntaxError", "empty key", {}, line_no);
        if (config.values.count(key))
            config.warnings.push_back("duplicate key '" + key + "' on line " +
                                      std::to_string(line_no) + " overrides the earlier value");
        validate_key(key, value, config.warnings);
        config.values[key] = value;
    }
    return config;
}

Config load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::Io, "FileRead", "cannot open config file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_config(text, path.has_parent_path() ? path.parent_path() : ".");
}

void apply_overrides(Config& config, const std::vector<std::string>& overrides) {
    for (const auto& entry : overrides) {
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCategory::Config, "SyntaxError",
                        "override must be key=value, got '" + entry + "'");
        std::string key = trim_copy(entry.substr(0, eq));
        std::string value = trim_copy(entry.substr(eq + 1));
        if (config.values.count(key) && config.values[key] != value)
            config.warnings.push_back("override replaces '" + key + " = " + config.values[key] +
                                      "' with '" + value + "'");
        validate_key(key, value, config.warnings);
        config.values[key] = value;
    }
}

void check_required(const Config& config) {
    for (const char* key : {"source_tree", "output_dir"})
        if (!config.has(key))
            throw Error(ErrorCategory::Config, "MissingRequired",
                        std::string("key '") + key + "' is required");
    bool preset = config.has("analysis.preset");
    bool pipeline = config.has("analysis.pipeline");
    if (!preset && !pipeline)
        throw Error(ErrorCategory::Config, "MissingRequired",
                    "one of analysis.preset or analysis.pipeline is required");
    if (preset && pipeline)
        throw Error(ErrorCategory::Config, "InvalidValue",
                    "analysis.preset and analysis.pipeline are mutually exclusive");
}

}  // namespace varscope
