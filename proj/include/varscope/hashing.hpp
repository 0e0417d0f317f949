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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace varscope {

/// FNV-1a 64-bit; used for stable opaque-atom names.
uint64_t fnv1a64(std::string_view data);
/// fnv1a64 as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view data);

/// SHA-256 as lowercase hex.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::filesystem::path& path);

/// Fingerprint of an input file set: sha256 over the sorted
/// "<path>\0<content-hash>\n" pairs, so it changes whenever any member file's
/// content (or the set itself) changes.
std::string fingerprint_files(std::vector<std::pair<std::string, std::string>> path_hashes);

}  // namespace varscope
