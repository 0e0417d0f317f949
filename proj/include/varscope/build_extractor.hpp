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

#include "varscope/formula.hpp"

namespace varscope {

struct UnresolvedLine {
    std::string file;  // makefile path relative to the tree root
    int line = 0;
    std::string text;

    friend bool operator==(const UnresolvedLine&, const UnresolvedLine&) = default;
};

/// Map from source file (normalized relative path) to its presence
/// condition, plus the makefile lines the extractor skipped.
struct BuildModel {
    std::map<std::string, Formula> entries;
    std::vector<UnresolvedLine> unresolved;  // sorted by (file, line)
    /// Makefiles actually read, relative to the tree root; input set for the
    /// cache fingerprint.
    std::vector<std::string> source_files;
};

struct BuildOptions {
    /// Tristate encoding: obj-$(CONFIG_X) maps to (X || X_MODULE) and
    /// `ifdef CONFIG_X` to the same; with tristate = false both map to X.
    bool tristate = true;
    /// lookup_pc result for files without an entry.
    bool missing_file_pc = true;
    std::string variability_prefix = "CONFIG_";
};

/// Parses the Kbuild-style makefile tree rooted at `root` (top-level Kbuild
/// or Makefile; obj-* directory items recurse). Supported per line:
/// obj-y/obj-m/obj-$(CONFIG_X) += items, ifeq/ifneq (($(CONFIG_X),y)),
/// ifdef CONFIG_X, else, endif. Everything else lands in `unresolved`.
BuildModel extract_build(const std::filesystem::path& root, const BuildOptions& opts);

/// Returns the entry's PC, or the configured default for absent files; absent
/// lookups are appended to *diagnostics when provided.
Formula lookup_pc(const BuildModel& m, const std::string& file, const BuildOptions& opts,
                  std::vector<std::string>* diagnostics = nullptr);

}  // namespace varscope
