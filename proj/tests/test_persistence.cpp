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

#include <doctest.h>

#include "support/test_util.hpp"
#include "varscope/archive.hpp"
#include "varscope/cache.hpp"
#include "varscope/code_extractor.hpp"
#include "varscope/error.hpp"
#include "varscope/hashing.hpp"
#include "varscope/runner.hpp"
#include "varscope/zip_file.hpp"

using namespace varscope;
using namespace varscope::test;

namespace fs = std::filesystem;

namespace {

bool elements_equal(const CodeElement& a, const CodeElement& b) {
    if (a.line_start != b.line_start || a.line_end != b.line_end) return false;
    if (a.condition != b.condition || a.presence_condition != b.presence_condition) return false;
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (a.children[i].branch_kind != b.children[i].branch_kind) return false;
        if (!elements_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

// Random canonical element trees for the round-trip property.
CodeBlock random_block(RandomFormulaGen& gen, int depth, int& line) {
    CodeBlock block;
    block.branch_kind = static_cast<BranchKind>(gen.pick(5));
    block.file = "random.c";
    block.line_start = line;
    block.condition = gen.gen_canonical(3);
    block.presence_condition = gen.gen_canonical(4);
    line += 2;
    if (depth > 0) {
        int children = gen.pick(3);
        for (int i = 0; i < children; ++i)
            block.children.push_back(random_block(gen, depth - 1, line));
    }
    block.line_end = line++;
    return block;
}

}  // namespace

TEST_CASE("code model cache round-trips structurally") {
    ExtractOptions opts;
    std::string source =
        "#ifdef CONFIG_A\n"
        "#if defined(CONFIG_B) || (X > 1)\n"
        "int x;\n"
        "#elif defined(CONFIG_C)\n"
        "int y;\n"
        "#else\n"
        "int z;\n"
        "#endif\n"
        "#endif\n";
    CodeModel model = extract_file(source, "net/deep.c", opts);
    std::string text = serialize_code_model(model, "fp");
    CodeModel loaded = deserialize_code_model(text);
    CHECK(loaded.file == model.file);
    CHECK(loaded.unknown_atoms == model.unknown_atoms);
    CHECK(elements_equal(loaded.root, model.root));
    // Serialization is deterministic.
    CHECK(serialize_code_model(loaded, "fp") == text);
}

TEST_CASE("randomized element trees round-trip") {
    RandomFormulaGen gen(60519, 6);
    for (int i = 0; i < 50; ++i) {
        CodeModel model;
        model.file = "random.c";
        int line = 2;
        model.root.file = model.file;
        int blocks = 1 + gen.pick(3);
        for (int b = 0; b < blocks; ++b)
            model.root.children.push_back(random_block(gen, 3, line));
        model.root.line_end = line;
        for (int a = 0; a < gen.pick(3); ++a)
            model.unknown_atoms.insert("U_000000000000000" + std::to_string(a));
        CodeModel loaded = deserialize_code_model(serialize_code_model(model, ""));
        CHECK(elements_equal(loaded.root, model.root));
        CHECK(loaded.unknown_atoms == model.unknown_atoms);
    }
}

TEST_CASE("cache documents are human-readable with rendered formulas") {
    ExtractOptions opts;
    CodeModel model = extract_file("#ifdef CONFIG_A\nint a;\n#endif\n", "a.c", opts);
    std::string doc = serialize_code_model(model, "fp");
    CHECK(doc.find("\"condition\": \"A\"") != std::string::npos);
    CHECK(doc.find("\"children\": []") != std::string::npos);
    CHECK(doc.back() == '\n');

    TempDir dir("cache-doc");
    write_build_cache(BuildModel{}, dir.path(), "fp");
    CHECK(read_file(dir.path() / "build.json").find("\"entries\": {}") != std::string::npos);
}

TEST_CASE("fingerprints change with any input file content or the set itself") {
    std::string base = fingerprint_files({{"a.c", sha256_hex("one")}, {"b.c", sha256_hex("two")}});
    CHECK(base == fingerprint_files({{"b.c", sha256_hex("two")}, {"a.c", sha256_hex("one")}}));
    CHECK(base != fingerprint_files({{"a.c", sha256_hex("edited")}, {"b.c", sha256_hex("two")}}));
    CHECK(base != fingerprint_files({{"a.c", sha256_hex("one")}}));
    CHECK(base != fingerprint_files({{"a.c", sha256_hex("one")},
                                     {"b.c", sha256_hex("two")},
                                     {"c.c", sha256_hex("three")}}));
}

TEST_CASE("code cache write/read with fingerprints") {
    TempDir dir("cache-code");
    ExtractOptions opts;
    std::string source = "#ifdef CONFIG_A\nint a;\n#endif\n";
    CodeModel model = extract_file(source, "a.c", opts);
    write_code_cache(model, dir.path(),
                     fingerprint_files({{"a.c", sha256_hex(source)}}));

    std::vector<FileHash> expected{{"a.c", sha256_hex(source)}};
    auto models = read_code_cache(dir.path(), &expected);
    REQUIRE(models.size() == 1);
    CHECK(elements_equal(models[0].root, model.root));

    // Changed source content: fingerprint mismatch.
    std::vector<FileHash> changed{{"a.c", sha256_hex("int other;\n")}};
    CHECK_THROWS_WITH_AS(read_code_cache(dir.path(), &changed),
                         doctest::Contains("FingerprintMismatch"), Error);

    // A new undiscovered file also invalidates.
    std::vector<FileHash> extra{{"a.c", sha256_hex(source)}, {"b.c", sha256_hex("x")}};
    CHECK_THROWS_AS(read_code_cache(dir.path(), &extra), Error);

    // ignore_fingerprint loads whatever is cached.
    CHECK(read_code_cache(dir.path(), nullptr).size() == 1);
}

TEST_CASE("missing and version-mismatched caches are rejected") {
    TempDir dir("cache-miss");
    CHECK_THROWS_WITH_AS(read_code_cache(dir.path(), nullptr), doctest::Contains("MissingCache"),
                         Error);
    CHECK_THROWS_AS(read_build_cache(dir.path()), Error);

    // Tamper with the version field.
    write_file(dir.path() / "build.json",
               "{\n  \"version\": 99,\n  \"kind\": \"build\",\n  \"source_fingerprint\": \"\",\n"
               "  \"entries\": {},\n  \"unresolved\": [],\n  \"source_files\": []\n}\n");
    CHECK_THROWS_WITH_AS(read_build_cache(dir.path()), doctest::Contains("VersionMismatch"),
                         Error);
}

TEST_CASE("build and vm caches round-trip") {
    TempDir dir("cache-bv");
    BuildModel build;
    build.entries.emplace("a.c", Formula::constant(true));
    build.entries.emplace("net/tcp.c",
                          disj(Formula::var("TCP"), Formula::var("TCP_MODULE")));
    build.unresolved.push_back({"Makefile", 7, "weird line"});
    build.source_files = {"Makefile", "net/Makefile"};
    write_build_cache(build, dir.path(), "fp-b");
    std::string fingerprint;
    BuildModel build2 = read_build_cache(dir.path(), &fingerprint);
    CHECK(fingerprint == "fp-b");
    CHECK(build2.entries.size() == 2);
    CHECK(build2.entries.at("net/tcp.c") == build.entries.at("net/tcp.c"));
    CHECK(build2.unresolved == build.unresolved);
    CHECK(build2.source_files == build.source_files);

    VariabilityModel vm;
    vm.features.emplace("NET", FeatureKind::Bool);
    vm.features.emplace("TCP", FeatureKind::Tristate);
    vm.constraints.push_back(neg(conj(Formula::var("TCP"), Formula::var("TCP_MODULE"))));
    vm.constraints.push_back(disj(neg(disj(Formula::var("TCP"), Formula::var("TCP_MODULE"))),
                                  Formula::var("NET")));
    vm.source_positions = {{"Kconfig", 5}, {"Kconfig", 6}};
    vm.constraint = simplify(conj_flat(vm.constraints));
    vm.source_files = {"Kconfig"};
    write_vm_cache(vm, dir.path(), "fp-v");
    VariabilityModel vm2 = read_vm_cache(dir.path());
    CHECK(vm2.features == vm.features);
    REQUIRE(vm2.constraints.size() == 2);
    CHECK(vm2.constraints[0] == vm.constraints[0]);
    CHECK(vm2.constraints[1] == vm.constraints[1]);
    CHECK(vm2.constraint == vm.constraint);
    CHECK(vm2.source_positions[1].line == 6);
}

TEST_CASE("every fixture model round-trips through its cache form") {
    auto fixture = env_path("VARSCOPE_FIXTURES") / "mini-spl";
    ExtractOptions opts;
    for (const auto& entry : fs::recursive_directory_iterator(fixture / "src")) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension();
        if (ext != ".c" && ext != ".h") continue;
        std::string rel = fs::relative(entry.path(), fixture / "src").generic_string();
        CAPTURE(rel);
        CodeModel model = extract_file(read_file(entry.path()), rel, opts);
        CodeModel loaded = deserialize_code_model(serialize_code_model(model, ""));
        CHECK(elements_equal(loaded.root, model.root));
        CHECK(loaded.unknown_atoms == model.unknown_atoms);
    }

    TempDir dir("fixture-bv");
    BuildModel build = extract_build(fixture / "src", BuildOptions{});
    write_build_cache(build, dir.path(), "fp");
    BuildModel build2 = read_build_cache(dir.path());
    REQUIRE(build2.entries.size() == build.entries.size());
    for (const auto& [file, pc] : build.entries) CHECK(build2.entries.at(file) == pc);

    VariabilityModel vm = extract_varmodel({fixture / "model" / "Kconfig"}, {});
    write_vm_cache(vm, dir.path(), "fp");
    VariabilityModel vm2 = read_vm_cache(dir.path());
    CHECK(vm2.constraint == vm.constraint);
    CHECK(vm2.features == vm.features);
}

TEST_CASE("zip writer round-trips and stays deterministic") {
    TempDir dir("zip");
    std::vector<ZipEntry> entries{{"a.txt", "hello"},
                                  {"sub/dir/b.bin", std::string("\x00\x01\xff", 3)},
                                  {"empty", ""}};
    write_zip(dir.path() / "one.zip", entries);
    write_zip(dir.path() / "two.zip", entries);
    CHECK(read_file(dir.path() / "one.zip") == read_file(dir.path() / "two.zip"));

    auto loaded = read_zip(dir.path() / "one.zip");
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[0].name == "a.txt");
    CHECK(loaded[0].data == "hello");
    CHECK(loaded[1].data == entries[1].data);

    // CRC corruption is caught.
    std::string bytes = read_file(dir.path() / "one.zip");
    auto pos = bytes.find("hello");
    bytes[pos] = 'J';
    write_file(dir.path() / "bad.zip", bytes);
    CHECK_THROWS_WITH_AS(read_zip(dir.path() / "bad.zip"), doctest::Contains("ArchiveCorrupt"),
                         Error);
}

TEST_CASE("crc32 reference values") {
    CHECK(crc32("") == 0x00000000u);
    CHECK(crc32("123456789") == 0xCBF43926u);  // the classic check value
}

TEST_CASE("archive: build, verify, unpack, tamper detection") {
    TempDir stage("arch-stage");
    write_file(stage.path() / "out" / "feature_effects.csv", "feature,effect\n");
    write_file(stage.path() / "out" / "run_report.json", "{}\n");
    write_file(stage.path() / "out" / "run.log", "[info] hi\n");
    write_file(stage.path() / "cache" / "build.json", "{\"version\":1}\n");
    write_file(stage.path() / "tree" / "a.c", "int a;\n");

    Config config = load_config(
        "source_tree = tree\noutput_dir = out\nanalysis.preset = metrics\n",
        stage.path().string());
    Logger logger;
    logger.set_quiet(true);

    ArchiveInputs inputs;
    inputs.output_dir = stage.path() / "out";
    inputs.cache_dir = stage.path() / "cache";
    inputs.source_tree = stage.path() / "tree";
    inputs.result_files = {"feature_effects.csv"};
    fs::path archive = stage.path() / "run.zip";
    archive_run(archive, config, inputs, logger);

    // Refuses to overwrite without the flag.
    CHECK_THROWS_WITH_AS(archive_run(archive, config, inputs, logger),
                         doctest::Contains("ArchiveExists"), Error);
    inputs.overwrite = true;
    CHECK_NOTHROW(archive_run(archive, config, inputs, logger));

    TempDir unpacked("arch-unpack");
    unpack_archive(archive, unpacked.path());
    CHECK(read_file(unpacked.path() / "results" / "feature_effects.csv") == "feature,effect\n");
    CHECK(fs::exists(unpacked.path() / "input" / "a.c"));
    CHECK(fs::exists(unpacked.path() / "cache" / "build.json"));
    CHECK(fs::exists(unpacked.path() / "config.properties"));

    // include_sources = false drops input/ and the manifest records it.
    inputs.include_sources = false;
    fs::path slim = stage.path() / "slim.zip";
    archive_run(slim, config, inputs, logger);
    TempDir slim_out("arch-slim");
    unpack_archive(slim, slim_out.path());
    CHECK_FALSE(fs::exists(slim_out.path() / "input"));
    CHECK(read_file(slim_out.path() / "manifest.json").find("\"include_sources\": false") !=
          std::string::npos);

    // Tampering with any archived byte fails verification. A zip with a
    // recomputed CRC but unchanged manifest must still fail the hash check.
    auto entries = read_zip(archive);
    for (auto& entry : entries)
        if (entry.name == "results/feature_effects.csv") entry.data = "feature,effect,evil\n";
    write_zip(archive, entries);
    TempDir tampered("arch-tamper");
    CHECK_THROWS_WITH_AS(unpack_archive(archive, tampered.path()),
                         doctest::Contains("hash mismatch"), Error);
}

TEST_CASE("archives of one run differ only in the manifest timestamp") {
    TempDir stage("arch-det");
    write_file(stage.path() / "out" / "t.csv", "x\n");
    Config config =
        load_config("source_tree = missing\noutput_dir = out\nanalysis.preset = metrics\n",
                    stage.path().string());
    Logger logger;
    logger.set_quiet(true);
    ArchiveInputs inputs;
    inputs.output_dir = stage.path() / "out";
    inputs.cache_dir = stage.path() / "nocache";
    inputs.source_tree = stage.path() / "notree";
    inputs.result_files = {"t.csv"};
    archive_run(stage.path() / "a.zip", config, inputs, logger);
    archive_run(stage.path() / "b.zip", config, inputs, logger);

    auto a = read_zip(stage.path() / "a.zip");
    auto b = read_zip(stage.path() / "b.zip");
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        if (a[i].name == "manifest.json") {
            auto strip = [](std::string text) {
                auto pos = text.find("\"created\"");
                auto end = text.find('\n', pos);
                return text.erase(pos, end - pos);
            };
            CHECK(strip(a[i].data) == strip(b[i].data));
        } else {
            CHECK(a[i].data == b[i].data);
        }
    }
}
