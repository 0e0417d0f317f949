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
#include <vector>

namespace varscope {

struct ZipEntry {
    std::string name;  // forward-slash path inside the archive
    std::string data;
};

uint32_t crc32(std::string_view data);

/// Writes a standard ZIP archive with stored (uncompressed) entries and a
/// fixed DOS timestamp, so identical content produces identical bytes.
void write_zip(const std::filesystem::path& path, const std::vector<ZipEntry>& entries);

/// Reads a ZIP produced by write_zip (stored entries); verifies each CRC.
std::vector<ZipEntry> read_zip(const std::filesystem::path& path);

}  // namespace varscope
