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

#include "varscope/zip_file.hpp"

#include <array>
#include <fstream>

#include "varscope/error.hpp"

namespace varscope {

namespace {

// 1980-01-01 00:00:00, the DOS epoch; fixed so archives are reproducible.
constexpr uint16_t kDosTime = 0;
constexpr uint16_t kDosDate = (1 << 5) | 1;

constexpr uint32_t kLocalSig = 0x04034b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kEocdSig = 0x06054b50;

void put16(std::string& out, uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, uint32_t v) {
    put16(out, static_cast<uint16_t>(v & 0xffff));
    put16(out, static_cast<uint16_t>(v >> 16));
}

class ByteReader {
public:
    explicit ByteReader(const std::string& data) : data_(data) {}

    void seek(size_t pos) { pos_ = pos; }
    size_t pos() const { return pos_; }
    size_t size() const { return data_.size(); }

    uint16_t get16() { return static_cast<uint16_t>(get8() | (get8() << 8)); }
    uint32_t get32() {
        uint32_t lo = get16();
        return lo | (static_cast<uint32_t>(get16()) << 16);
    }
    std::string get_bytes(size_t n) {
        require(n);
        std::string out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

private:
    uint32_t get8() {
        require(1);
        return static_cast<unsigned char>(data_[pos_++]);
    }
    void require(size_t n) const {
        if (pos_ + n > data_.size())
            throw Error(ErrorCategory::Io, "ArchiveCorrupt", "truncated zip data");
    }

    const std::string& data_;
    size_t pos_ = 0;
};

const std::array<uint32_t, 256>& crc_table() {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

}  // namespace

uint32_t crc32(std::string_view data) {
    uint32_t crc = 0xFFFFFFFFu;
    for (unsigned char c : data) crc = crc_table()[(crc ^ c) & 0xff] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

void write_zip(const std::filesystem::path& path, const std::vector<ZipEntry>& entries) {
    constexpr uint32_t kMax = 0xFFFFFFFFu;
    if (entries.size() > 0xFFFF)
        throw Error(ErrorCategory::Io, "ArchiveTooLarge",
                    "more than 65535 entries would need zip64");
    std::string out;
    struct Central {
        std::string name;
        uint32_t crc;
        uint32_t size;
        uint32_t offset;
    };
    std::vector<Central> centrals;

    for (const auto& entry : entries) {
        if (entry.data.size() >= kMax)
            throw Error(ErrorCategory::Io, "ArchiveTooLarge",
                        "entry " + entry.name + " exceeds the 4 GiB zip limit");
        uint32_t offset = static_cast<uint32_t>(out.size());
        uint32_t crc = crc32(entry.data);
        auto size = static_cast<uint32_t>(entry.data.size());
        put32(out, kLocalSig);
        put16(out, 20);  // version needed
        put16(out, 0);   // flags
        put16(out, 0);   // method: stored
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, crc);
        put32(out, size);
        put32(out, size);
        put16(out, static_cast<uint16_t>(entry.name.size()));
        put16(out, 0);  // extra length
        out += entry.name;
        out += entry.data;
        centrals.push_back({entry.name, crc, size, offset});
    }

    uint32_t central_offset = static_cast<uint32_t>(out.size());
    for (const auto& central : centrals) {
        put32(out, kCentralSig);
        put16(out, 20);  // made by
        put16(out, 20);  // version needed
        put16(out, 0);
        put16(out, 0);
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, central.crc);
        put32(out, central.size);
        put32(out, central.size);
        put16(out, static_cast<uint16_t>(central.name.size()));
        put16(out, 0);  // extra
        put16(out, 0);  // comment
        put16(out, 0);  // disk
        put16(out, 0);  // internal attrs
        put32(out, 0);  // external attrs
        put32(out, central.offset);
        out += central.name;
    }
    uint32_t central_size = static_cast<uint32_t>(out.size()) - central_offset;

    put32(out, kEocdSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<uint16_t>(centrals.size()));
    put16(out, static_cast<uint16_t>(centrals.size()));
    put32(out, central_size);
    put32(out, central_offset);
    put16(out, 0);

    std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCategory::Io, "FileWrite", "cannot write " + path.string());
    file << out;
    if (!file) throw Error(ErrorCategory::Io, "FileWrite", "write failed for " + path.string());
}

std::vector<ZipEntry> read_zip(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCategory::Io, "FileRead", "cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    // Locate the end-of-central-directory record (no archive comments here,
    // but scan backwards to be safe).
    if (data.size() < 22)
        throw Error(ErrorCategory::Io, "ArchiveCorrupt", path.string() + " is not a zip file");
    size_t eocd = std::string::npos;
    size_t scan_limit = data.size() >= 22 + 65535 ? data.size() - 22 - 65535 : 0;
    for (size_t i = data.size() - 22; ; --i) {
        if (static_cast<unsigned char>(data[i]) == 0x50 && data.compare(i + 1, 3, "K\x05\x06") == 0) {
            eocd = i;
            break;
        }
        if (i == scan_limit) break;
    }
    if (eocd == std::string::npos)
        throw Error(ErrorCategory::Io, "ArchiveCorrupt",
                    "no end-of-central-directory record in " + path.string());

    ByteReader reader(data);
    reader.seek(eocd);
    if (reader.get32() != kEocdSig)
        throw Error(ErrorCategory::Io, "ArchiveCorrupt", "bad EOCD signature");
    reader.get16();
    reader.get16();
    reader.get16();
    uint16_t total = reader.get16();
    reader.get32();
    uint32_t central_offset = reader.get32();

    std::vector<ZipEntry> entries;
    reader.seek(central_offset);
    for (uint16_t i = 0; i < total; ++i) {
        if (reader.get32() != kCentralSig)
            throw Error(ErrorCategory::Io, "ArchiveCorrupt", "bad central directory entry");
        reader.get16();  // made by
        reader.get16();  // needed
        reader.get16();  // flags
        uint16_t method = reader.get16();
        reader.get16();  // time
        reader.get16();  // date
        uint32_t crc = reader.get32();
        uint32_t csize = reader.get32();
        uint32_t usize = reader.get32();
        uint16_t name_len = reader.get16();
        uint16_t extra_len = reader.get16();
        uint16_t comment_len = reader.get16();
        reader.get16();  // disk
        reader.get16();  // internal
        reader.get32();  // external
        uint32_t local_offset = reader.get32();
        std::string name = reader.get_bytes(name_len);
        reader.get_bytes(extra_len);
        reader.get_bytes(comment_len);
        if (method != 0 || csize != usize)
            throw Error(ErrorCategory::Io, "ArchiveCorrupt",
                        "entry " + name + " is not stored uncompressed");

        size_t resume = reader.pos();
        reader.seek(local_offset);
        if (reader.get32() != kLocalSig)
            throw Error(ErrorCategory::Io, "ArchiveCorrupt", "bad local header for " + name);
        reader.seek(local_offset + 26);
        uint16_t lf_name_len = reader.get16();
        uint16_t lf_extra_len = reader.get16();
        reader.get_bytes(lf_name_len);
        reader.get_bytes(lf_extra_len);
        std::string content = reader.get_bytes(csize);
        if (crc32(content) != crc)
            throw Error(ErrorCategory::Io, "ArchiveCorrupt", "CRC mismatch for " + name);
        entries.push_back({std::move(name), std::move(content)});
        reader.seek(resume);
    }
    return entries;
}

}  // namespace varscope
