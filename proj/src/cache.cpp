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

#include "varscope/cache.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "varscope/error.hpp"
#include "varscope/hashing.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace varscope {

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::Io, "FileWrite", "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCategory::Io, "FileWrite", "write failed for " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::FILE* file = std::fopen(path.c_str(), "rb");
    if (!file) throw Error(ErrorCategory::Io, "FileRead", "cannot read " + path.string());
    std::string data;
    char buffer[1 << 16];
    size_t got;
    while ((got = std::fread(buffer, 1, sizeof buffer, file)) > 0) data.append(buffer, got);
    bool failed = std::ferror(file) != 0;
    std::fclose(file);
    if (failed) throw Error(ErrorCategory::Io, "FileRead", "read failed for " + path.string());
    return data;
}

ordered_json parse_json(const std::string& text, const std::string& what) {
    ordered_json doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorCategory::Extraction, "CacheCorrupt", "invalid JSON in " + what);
    return doc;
}

void check_version(const ordered_json& doc, const std::string& what) {
    int version = doc.value("version", -1);
    if (version != kCacheFormatVersion)
        throw Error(ErrorCategory::Extraction, "VersionMismatch",
                    what + " has cache format version " + std::to_string(version) +
                        ", expected " + std::to_string(kCacheFormatVersion));
}

BranchKind branch_kind_from(const std::string& name) {
    if (name == "If") return BranchKind::If;
    if (name == "Elif") return BranchKind::Elif;
    if (name == "Else") return BranchKind::Else;
    if (name == "Ifdef") return BranchKind::Ifdef;
    if (name == "Ifndef") return BranchKind::Ifndef;
    throw Error(ErrorCategory::Extraction, "CacheCorrupt", "unknown branch kind '" + name + "'");
}

ordered_json element_to_json(const CodeElement& element, const CodeBlock* as_block) {
    ordered_json doc;
    if (as_block) doc["branch_kind"] = branch_kind_name(as_block->branch_kind);
    doc["line_start"] = element.line_start;
    doc["line_end"] = element.line_end;
    doc["condition"] = render(element.condition);
    doc["presence_condition"] = render(element.presence_condition);
    doc["children"] = ordered_json::array();
    for (const auto& child : element.children)
        doc["children"].push_back(element_to_json(child, &child));
    return doc;
}

}  // namespace


namespace {

// Minimal JSON reader for the cache documents this module writes itself.
// The cached-rerun path deserializes thousands of small documents, which a
// general-purpose DOM parser dominates in profiles.
class JsonCursor {
public:
    explicit JsonCursor(std::string_view text) : text_(text) {}

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool try_consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string key() {
        std::string name = string_value();
        expect(':');
        return name;
    }

    std::string string_value() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected a string");
        ++pos_;
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_++];
            if (c == '"') return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= text_.size()) break;
            char esc = text_[pos_++];
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case '/': out += '/'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'u': {
                    if (pos_ + 4 > text_.size()) fail("truncated unicode escape");
                    unsigned code = 0;
                    for (int i = 0; i < 4; ++i) {
                        char h = text_[pos_++];
                        code <<= 4;
                        if (h >= '0' && h <= '9') code |= h - '0';
                        else if (h >= 'a' && h <= 'f') code |= h - 'a' + 10;
                        else if (h >= 'A' && h <= 'F') code |= h - 'A' + 10;
                        else fail("bad unicode escape");
                    }
                    if (code < 0x80) {
                        out += static_cast<char>(code);
                    } else if (code < 0x800) {
                        out += static_cast<char>(0xC0 | (code >> 6));
                        out += static_cast<char>(0x80 | (code & 0x3F));
                    } else {
                        out += static_cast<char>(0xE0 | (code >> 12));
                        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                        out += static_cast<char>(0x80 | (code & 0x3F));
                    }
                    break;
                }
                default: fail("bad escape");
            }
        }
        fail("unterminated string");
    }

    int64_t int_value() {
        skip_ws();
        bool negative = try_consume('-');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected an integer");
        int64_t value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            value = value * 10 + (text_[pos_++] - '0');
        return negative ? -value : value;
    }

    void end() {
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content");
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorCategory::Extraction, "CacheCorrupt",
                    message + " at offset " + std::to_string(pos_) + " in cache document");
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\n' || text_[pos_] == '\t' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

CodeBlock read_block(JsonCursor& cursor, const std::string& file);

// Reads the {...} of one element; `kind` already consumed for blocks.
void read_element_fields(JsonCursor& cursor, CodeElement& element, const std::string& file,
                         bool after_branch_kind) {
    element.file = file;
    if (!after_branch_kind) cursor.expect('{');
    bool expect_comma = after_branch_kind;
    for (const char* expected : {"line_start", "line_end", "condition",
                                 "presence_condition", "children"}) {
        if (expect_comma) cursor.expect(',');
        expect_comma = true;
        if (cursor.key() != expected) cursor.fail(std::string("expected key ") + expected);
        if (expected[0] == 'l') {
            (expected[5] == 's' ? element.line_start : element.line_end) =
                static_cast<int>(cursor.int_value());
        } else if (expected[0] == 'c' && expected[1] == 'o') {
            element.condition = parse_formula(cursor.string_value());
        } else if (expected[0] == 'p') {
            element.presence_condition = parse_formula(cursor.string_value());
        } else {
            cursor.expect('[');
            if (!cursor.try_consume(']')) {
                do {
                    element.children.push_back(read_block(cursor, file));
                } while (cursor.try_consume(','));
                cursor.expect(']');
            }
        }
    }
    cursor.expect('}');
}

CodeBlock read_block(JsonCursor& cursor, const std::string& file) {
    CodeBlock block;
    cursor.expect('{');
    if (cursor.key() != "branch_kind") cursor.fail("expected key branch_kind");
    block.branch_kind = branch_kind_from(cursor.string_value());
    read_element_fields(cursor, block, file, true);
    return block;
}

}  // namespace

fs::path code_cache_path(const fs::path& cache_dir, const std::string& rel_path) {
    std::string flat;
    for (char c : rel_path) flat += (c == '/') ? std::string("__") : std::string(1, c);
    return cache_dir / "code" / (flat + ".json");
}

std::string serialize_code_model(const CodeModel& model, const std::string& source_fingerprint) {
    ordered_json doc;
    doc["version"] = kCacheFormatVersion;
    doc["kind"] = "code";
    doc["source_fingerprint"] = source_fingerprint;
    doc["file"] = model.file;
    doc["unknown_atoms"] = ordered_json::array();
    for (const auto& atom : model.unknown_atoms) doc["unknown_atoms"].push_back(atom);
    doc["root"] = element_to_json(model.root, nullptr);
    return doc.dump(2) + "\n";
}

CodeModel deserialize_code_model(const std::string& text, std::string* fingerprint_out) {
    JsonCursor cursor(text);
    CodeModel model;
    cursor.expect('{');
    if (cursor.key() != "version") cursor.fail("expected key version");
    int64_t version = cursor.int_value();
    if (version != kCacheFormatVersion)
        throw Error(ErrorCategory::Extraction, "VersionMismatch",
                    "code cache entry has cache format version " + std::to_string(version) +
                        ", expected " + std::to_string(kCacheFormatVersion));
    cursor.expect(',');
    if (cursor.key() != "kind" || cursor.string_value() != "code")
        cursor.fail("not a code cache document");
    cursor.expect(',');
    if (cursor.key() != "source_fingerprint") cursor.fail("expected key source_fingerprint");
    std::string fingerprint = cursor.string_value();
    cursor.expect(',');
    if (cursor.key() != "file") cursor.fail("expected key file");
    model.file = cursor.string_value();
    cursor.expect(',');
    if (cursor.key() != "unknown_atoms") cursor.fail("expected key unknown_atoms");
    cursor.expect('[');
    if (!cursor.try_consume(']')) {
        do {
            model.unknown_atoms.insert(cursor.string_value());
        } while (cursor.try_consume(','));
        cursor.expect(']');
    }
    cursor.expect(',');
    if (cursor.key() != "root") cursor.fail("expected key root");
    read_element_fields(cursor, model.root, model.file, false);
    cursor.expect('}');
    cursor.end();
    if (fingerprint_out) *fingerprint_out = fingerprint;
    return model;
}

void write_code_cache(const CodeModel& model, const fs::path& cache_dir,
                      const std::string& source_fingerprint) {
    write_text_file(code_cache_path(cache_dir, model.file),
                    serialize_code_model(model, source_fingerprint));
}

std::vector<CodeModel> read_code_cache(const fs::path& cache_dir,
                                       const std::vector<FileHash>* expected) {
    fs::path code_dir = cache_dir / "code";
    if (!fs::is_directory(code_dir))
        throw Error(ErrorCategory::Extraction, "MissingCache",
                    "no code cache under " + cache_dir.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(code_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error(ErrorCategory::Extraction, "MissingCache",
                    "code cache under " + cache_dir.string() + " is empty");

    std::vector<CodeModel> models;
    std::map<std::string, std::string> fingerprints;  // model file -> cached fingerprint
    for (const auto& file : files) {
        std::string fingerprint;
        models.push_back(deserialize_code_model(read_text_file(file), &fingerprint));
        fingerprints[models.back().file] = fingerprint;
    }

    if (expected) {
        if (expected->size() != models.size())
            throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                        "code cache holds " + std::to_string(models.size()) +
                            " entries but the source tree has " +
                            std::to_string(expected->size()) + " matching files");
        for (const auto& [path, hash] : *expected) {
            auto it = fingerprints.find(path);
            if (it == fingerprints.end())
                throw Error(ErrorCategory::Extraction, "MissingCache",
                            "no cache entry for " + path);
            if (it->second != fingerprint_files({{path, hash}}))
                throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                            "cache entry for " + path + " does not match the current file");
        }
    }

    std::sort(models.begin(), models.end(),
              [](const CodeModel& a, const CodeModel& b) { return a.file < b.file; });
    return models;
}

void write_build_cache(const BuildModel& model, const fs::path& cache_dir,
                       const std::string& source_fingerprint) {
    ordered_json doc;
    doc["version"] = kCacheFormatVersion;
    doc["kind"] = "build";
    doc["source_fingerprint"] = source_fingerprint;
    doc["entries"] = ordered_json::object();
    for (const auto& [file, pc] : model.entries) doc["entries"][file] = render(pc);
    doc["unresolved"] = ordered_json::array();
    for (const auto& line : model.unresolved)
        doc["unresolved"].push_back(
            {{"file", line.file}, {"line", line.line}, {"text", line.text}});
    doc["source_files"] = model.source_files;
    write_text_file(cache_dir / "build.json", doc.dump(2) + "\n");
}

namespace {

ordered_json read_model_cache(const fs::path& path, const char* kind,
                              std::string* fingerprint_out) {
    if (!fs::exists(path))
        throw Error(ErrorCategory::Extraction, "MissingCache",
                    std::string("no ") + kind + " cache at " + path.string());
    ordered_json doc = parse_json(read_text_file(path), path.string());
    check_version(doc, path.string());
    if (fingerprint_out) *fingerprint_out = doc.value("source_fingerprint", "");
    return doc;
}

}  // namespace

BuildModel read_build_cache(const fs::path& cache_dir, std::string* fingerprint_out) {
    ordered_json doc = read_model_cache(cache_dir / "build.json", "build", fingerprint_out);
    BuildModel model;
    for (const auto& [file, pc] : doc.at("entries").items())
        model.entries.emplace(file, parse_formula(pc.get<std::string>()));
    for (const auto& entry : doc.at("unresolved"))
        model.unresolved.push_back({entry.at("file").get<std::string>(),
                                    entry.at("line").get<int>(),
                                    entry.at("text").get<std::string>()});
    for (const auto& file : doc.at("source_files"))
        model.source_files.push_back(file.get<std::string>());
    return model;
}

void write_vm_cache(const VariabilityModel& model, const fs::path& cache_dir,
                    const std::string& source_fingerprint) {
    ordered_json doc;
    doc["version"] = kCacheFormatVersion;
    doc["kind"] = "vm";
    doc["source_fingerprint"] = source_fingerprint;
    doc["features"] = ordered_json::object();
    for (const auto& [name, kind] : model.features)
        doc["features"][name] = kind == FeatureKind::Tristate ? "tristate" : "bool";
    doc["constraints"] = ordered_json::array();
    for (size_t i = 0; i < model.constraints.size(); ++i) {
        doc["constraints"].push_back({{"formula", render(model.constraints[i])},
                                      {"file", model.source_positions[i].file},
                                      {"line", model.source_positions[i].line}});
    }
    doc["source_files"] = model.source_files;
    write_text_file(cache_dir / "vm.json", doc.dump(2) + "\n");
}

VariabilityModel read_vm_cache(const fs::path& cache_dir, std::string* fingerprint_out) {
    ordered_json doc = read_model_cache(cache_dir / "vm.json", "vm", fingerprint_out);
    VariabilityModel model;
    for (const auto& [name, kind] : doc.at("features").items())
        model.features.emplace(
            name, kind.get<std::string>() == "tristate" ? FeatureKind::Tristate
                                                        : FeatureKind::Bool);
    for (const auto& entry : doc.at("constraints")) {
        model.constraints.push_back(parse_formula(entry.at("formula").get<std::string>()));
        model.source_positions.push_back(
            {entry.at("file").get<std::string>(), entry.at("line").get<int>()});
    }
    model.constraint = simplify(conj_flat(model.constraints));
    for (const auto& file : doc.at("source_files"))
        model.source_files.push_back(file.get<std::string>());
    return model;
}

std::string describe_cache(const fs::path& cache_dir) {
    std::string out;
    fs::path code_dir = cache_dir / "code";
    if (fs::is_directory(code_dir)) {
        size_t count = 0;
        for (const auto& entry : fs::directory_iterator(code_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json") ++count;
        out += "code: " + std::to_string(count) + " cached file model(s)\n";
    } else {
        out += "code: absent\n";
    }
    for (const char* kind : {"build", "vm"}) {
        fs::path path = cache_dir / (std::string(kind) + ".json");
        if (!fs::exists(path)) {
            out += std::string(kind) + ": absent\n";
            continue;
        }
        try {
            ordered_json doc = parse_json(read_text_file(path), path.string());
            out += std::string(kind) + ": version " + std::to_string(doc.value("version", -1)) +
                   ", fingerprint " + doc.value("source_fingerprint", "?") + "\n";
        } catch (const Error& e) {
            out += std::string(kind) + ": unreadable (" + e.what() + ")\n";
        }
    }
    return out;
}

}  // namespace varscope
