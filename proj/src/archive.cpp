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

#include "varscope/archive.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "varscope/error.hpp"
#include "varscope/hashing.hpp"
#include "varscope/version.hpp"
#include "varscope/zip_file.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace varscope {

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Io, "FileRead", "cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void add_tree(std::vector<ZipEntry>& entries, const fs::path& root, const std::string& prefix) {
    if (!fs::is_directory(root)) return;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), root).generic_string();
        entries.push_back({prefix + rel, read_file(entry.path())});
    }
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buffer[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

}  // namespace

void archive_run(const fs::path& archive_path, const Config& config,
                 const ArchiveInputs& inputs, Logger& logger) {
    if (fs::exists(archive_path) && !inputs.overwrite)
        throw Error(ErrorCategory::Io, "ArchiveExists",
                    archive_path.string() + " already exists; set archive.overwrite = true");

    std::vector<ZipEntry> entries;
    entries.push_back({"config.properties", config.canonical_text()});
    for (const auto& name : inputs.result_files)
        entries.push_back({"results/" + name, read_file(inputs.output_dir / name)});
    for (const char* extra : {"run_report.json", "run.log"}) {
        fs::path path = inputs.output_dir / extra;
        if (fs::exists(path)) entries.push_back({extra, read_file(path)});
    }
    add_tree(entries, inputs.cache_dir, "cache/");
    if (inputs.include_sources) add_tree(entries, inputs.source_tree, "input/");

    std::sort(entries.begin(), entries.end(),
              [](const ZipEntry& a, const ZipEntry& b) { return a.name < b.name; });

    ordered_json manifest;
    manifest["tool"] = kToolName;
    manifest["tool_version"] = kToolVersion;
    manifest["config_fingerprint"] = config.fingerprint();
    manifest["created"] = iso_timestamp();
    manifest["include_sources"] = inputs.include_sources;
    manifest["files"] = ordered_json::array();
    for (const auto& entry : entries)
        manifest["files"].push_back({{"path", entry.name}, {"sha256", sha256_hex(entry.data)}});

    entries.insert(entries.begin(), {"manifest.json", manifest.dump(2) + "\n"});
    std::sort(entries.begin(), entries.end(),
              [](const ZipEntry& a, const ZipEntry& b) { return a.name < b.name; });

    write_zip(archive_path, entries);
    logger.info("archived " + std::to_string(entries.size()) + " files to " +
                archive_path.string());
}

void unpack_archive(const fs::path& archive_path, const fs::path& dest_dir) {
    std::vector<ZipEntry> entries = read_zip(archive_path);
    const ZipEntry* manifest_entry = nullptr;
    for (const auto& entry : entries)
        if (entry.name == "manifest.json") manifest_entry = &entry;
    if (!manifest_entry)
        throw Error(ErrorCategory::Io, "ArchiveVerification",
                    archive_path.string() + " has no manifest.json");

    ordered_json manifest = ordered_json::parse(manifest_entry->data, nullptr, false);
    if (manifest.is_discarded())
        throw Error(ErrorCategory::Io, "ArchiveVerification", "manifest.json is not valid JSON");

    std::map<std::string, std::string> listed;  // path -> sha256
    for (const auto& file : manifest.at("files"))
        listed.emplace(file.at("path").get<std::string>(), file.at("sha256").get<std::string>());

    if (listed.size() + 1 != entries.size())
        throw Error(ErrorCategory::Io, "ArchiveVerification",
                    "archive entry count does not match the manifest");
    for (const auto& entry : entries) {
        if (entry.name == "manifest.json") continue;
        auto it = listed.find(entry.name);
        if (it == listed.end())
            throw Error(ErrorCategory::Io, "ArchiveVerification",
                        "archive entry '" + entry.name + "' is not in the manifest");
        if (sha256_hex(entry.data) != it->second)
            throw Error(ErrorCategory::Io, "ArchiveVerification",
                        "hash mismatch for '" + entry.name + "': archive content was modified");
    }

    for (const auto& entry : entries) {
        fs::path target = dest_dir / entry.name;
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCategory::Io, "FileWrite", "cannot write " + target.string());
        out << entry.data;
    }
}

}  // namespace varscope
