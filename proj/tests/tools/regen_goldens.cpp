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

// Regenerates the checked-in golden files from the current implementation:
//
//   regen_goldens <tests-dir>
//
// Golden changes must be reviewed against the independent oracle tests
// (truth-table PC checks, chain exclusivity, brute-force analyses) before
// being committed.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "varscope/cache.hpp"
#include "varscope/code_extractor.hpp"
#include "varscope/config.hpp"
#include "varscope/error.hpp"
#include "varscope/varmodel.hpp"
#include "varscope/log.hpp"
#include "varscope/runner.hpp"

namespace fs = std::filesystem;
using namespace varscope;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: regen_goldens <tests-dir>\n";
        return 64;
    }
    fs::path tests_dir = argv[1];
    fs::path corpus_dir = tests_dir / "corpus";
    fs::path golden_dir = tests_dir / "golden";
    fs::path fixture_dir = tests_dir / "fixtures" / "mini-spl";

    ExtractOptions opts;

    // Corpus element trees (or expected errors).
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.path().extension() != ".c") continue;
        std::string stem = entry.path().stem().string();
        std::string source = read_file(entry.path());
        try {
            CodeModel model = extract_file(source, entry.path().filename().string(), opts);
            write_file(golden_dir / "corpus" / (stem + ".json"),
                       serialize_code_model(model, ""));
        } catch (const Error& e) {
            write_file(golden_dir / "corpus" / (stem + ".error.txt"),
                       e.code() + " " + std::to_string(e.line()) + "\n");
        }
    }

    // The fixture driver element tree.
    CodeModel driver = extract_file(read_file(fixture_dir / "src" / "driver.c"),
                                    "driver.c", opts);
    write_file(golden_dir / "driver.elements.json", serialize_code_model(driver, ""));

    // Valid configurations of the fixture variability model, one per line.
    {
        VariabilityModel vm = extract_varmodel({fixture_dir / "model" / "Kconfig"}, {});
        std::string listing;
        for (const auto& assignment : valid_configurations(vm)) {
            bool first = true;
            for (const auto& [name, value] : assignment) {
                if (!first) listing += ' ';
                first = false;
                listing += name + "=" + (value ? "1" : "0");
            }
            listing += '\n';
        }
        write_file(golden_dir / "mini-spl" / "valid_configurations.txt", listing);
    }

    // Fixture analysis tables, via full runs into a scratch directory.
    fs::path scratch = fs::temp_directory_path() / "varscope-golden-out";
    fs::remove_all(scratch);
    Logger logger;
    logger.set_quiet(true);

    auto run_conf = [&](const std::string& conf, const std::string& out_name,
                        const std::vector<std::string>& tables) {
        Config config = load_config_file(fixture_dir / "confs" / conf);
        apply_overrides(config, {"output_dir=" + (scratch / out_name).string(), "jobs=1",
                                 "pipeline.sequential=true"});
        run(config, logger);
        for (const auto& table : tables)
            write_file(golden_dir / "mini-spl" / table,
                       read_file(scratch / out_name / table));
    };
    run_conf("feature_effects.properties", "fe", {"feature_effects.csv", "pc_finder.csv"});
    run_conf("dead_blocks.properties", "dead", {"dead_blocks.csv"});
    run_conf("metrics.properties", "metrics", {"block_metrics.csv"});

    std::cout << "goldens regenerated under " << golden_dir << "\n";
    return 0;
}
