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
#include "varscope/config.hpp"
#include "varscope/error.hpp"
#include "varscope/pipeline.hpp"

using namespace varscope;
using namespace varscope::test;

namespace {

Config minimal_config(const std::string& extra = {}) {
    return load_config(
        "source_tree = src\noutput_dir = out\nanalysis.preset = metrics\n" + extra, ".");
}

}  // namespace

TEST_CASE("config parses properties syntax with defaults") {
    Config config = minimal_config();
    check_required(config);
    CHECK(config.get("output.format", "csv") == "csv");
    CHECK(config.get_int("jobs", 4) == 4);
    CHECK(config.warnings.empty());
}

TEST_CASE("config: comments, blank lines, duplicate override warning") {
    Config config = load_config(
        "# a comment\n"
        "\n"
        "source_tree = a\n"
        "source_tree = b\n",
        ".");
    CHECK(config.get("source_tree") == "b");
    REQUIRE(config.warnings.size() == 1);
    CHECK(config.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("config errors: syntax, invalid values, missing required") {
    CHECK_THROWS_WITH_AS(load_config("not a property line\n", "."),
                         doctest::Contains("SyntaxError"), Error);
    CHECK_THROWS_WITH_AS(load_config("jobs = 0\n", "."), doctest::Contains("InvalidValue"),
                         Error);
    CHECK_THROWS_AS(load_config("jobs = many\n", "."), Error);
    CHECK_THROWS_AS(load_config("output.format = xml\n", "."), Error);
    CHECK_THROWS_WITH_AS(check_required(load_config("source_tree = s\n", ".")),
                         doctest::Contains("MissingRequired"), Error);
    CHECK_THROWS_AS(
        check_required(load_config("source_tree = s\noutput_dir = o\n", ".")), Error);
    CHECK_THROWS_AS(check_required(minimal_config("analysis.pipeline = BlockMetrics(cmComponent())\n")),
                    Error);
}

TEST_CASE("unknown keys warn but never drop silently") {
    Config config = minimal_config("no.such.key = 1\n");
    REQUIRE(config.warnings.size() == 1);
    CHECK(config.warnings[0].find("no.such.key") != std::string::npos);
}

TEST_CASE("overrides apply after the file and win conflicts") {
    Config config = minimal_config("jobs = 2\n");
    apply_overrides(config, {"jobs=8", "log.level=debug"});
    CHECK(config.get_int("jobs", 0) == 8);
    CHECK(config.get("log.level") == "debug");
    CHECK_FALSE(config.warnings.empty());
    CHECK_THROWS_AS(apply_overrides(config, {"nonsense"}), Error);
}

TEST_CASE("fingerprint depends on resolved values only") {
    Config a = load_config("source_tree = s\noutput_dir = o\nanalysis.preset = metrics\n", ".");
    Config b = load_config(
        "# comment\nanalysis.preset = metrics\n\noutput_dir = o\nsource_tree = s\n", ".");
    CHECK(a.fingerprint() == b.fingerprint());
    apply_overrides(b, {"jobs=2"});
    CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("DSL: feature effect chain parses to a four-node graph") {
    PipelineGraph graph =
        parse_pipeline_dsl("FeatureEffects(PcFinder(cmComponent(), bmComponent()))");
    CHECK(graph.nodes.size() == 4);
    CHECK(graph.nodes[graph.sink].component == "FeatureEffects");
    CHECK(graph.uses(DataKind::CodeStream));
    CHECK(graph.uses(DataKind::BuildModel));
    CHECK_FALSE(graph.uses(DataKind::VarModel));
}

TEST_CASE("DSL: optional build input") {
    PipelineGraph graph = parse_pipeline_dsl("PcFinder(cmComponent())");
    CHECK(graph.nodes.size() == 2);
    CHECK(graph.nodes[graph.sink].component == "PcFinder");
}

TEST_CASE("DSL: terminals are shared nodes") {
    PipelineGraph graph = parse_pipeline_dsl(
        "DeadBlocks(cmComponent(), bmComponent(), vmComponent())");
    size_t terminals = 0;
    for (const auto& node : graph.nodes) terminals += node.terminal;
    CHECK(terminals == 3);
}

TEST_CASE("DSL error taxonomy") {
    CHECK_THROWS_WITH_AS(parse_pipeline_dsl("FeatureEffects(cmComponent())"),
                         doctest::Contains("KindMismatch"), Error);
    CHECK_THROWS_WITH_AS(parse_pipeline_dsl("FeatureEffects()"),
                         doctest::Contains("ArityMismatch"), Error);
    CHECK_THROWS_WITH_AS(parse_pipeline_dsl("Nonexistent(cmComponent())"),
                         doctest::Contains("UnknownComponent"), Error);
    CHECK_THROWS_WITH_AS(parse_pipeline_dsl("FeatureEffects(PcFinder(cmComponent())"),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_AS(parse_pipeline_dsl(""), Error);
    CHECK_THROWS_AS(parse_pipeline_dsl("cmComponent()"), Error);
    CHECK_THROWS_AS(parse_pipeline_dsl("PcFinder(cmComponent()) extra"), Error);
    // Errors carry a position.
    try {
        parse_pipeline_dsl("FeatureEffects(PcFinder(cmComponent()), oops)");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
}

TEST_CASE("presets mirror the DSL wirings") {
    CHECK(preset_graph("feature_effects").nodes.size() == 4);
    CHECK(preset_graph("dead_blocks").nodes[preset_graph("dead_blocks").sink].component ==
          "DeadBlocks");
    CHECK(preset_graph("metrics").nodes.size() == 2);
    CHECK_THROWS_AS(preset_graph("everything"), Error);
}

TEST_CASE("build_pipeline: vm terminal requires vm.extractor") {
    Config fig2 = load_config(
        "source_tree = s\noutput_dir = o\nanalysis.preset = feature_effects\n", ".");
    CHECK_NOTHROW(build_pipeline(fig2));

    Config dead = load_config(
        "source_tree = s\noutput_dir = o\nanalysis.preset = dead_blocks\n", ".");
    CHECK_THROWS_WITH_AS(build_pipeline(dead), doctest::Contains("variability-model"), Error);

    Config dead_ok = load_config(
        "source_tree = s\noutput_dir = o\nanalysis.preset = dead_blocks\n"
        "vm.extractor = kconfig\n",
        ".");
    CHECK_NOTHROW(build_pipeline(dead_ok));
}

TEST_CASE("build_pipeline: analyses with missing required inputs") {
    Config config = load_config(
        "source_tree = s\noutput_dir = o\n"
        "analysis.pipeline = DeadBlocks(cmComponent(), bmComponent())\n"
        "vm.extractor = kconfig\n",
        ".");
    CHECK_THROWS_WITH_AS(build_pipeline(config), doctest::Contains("MissingInput"), Error);
}

TEST_CASE("build_pipeline: intermediate result names are checked") {
    Config config = load_config(
        "source_tree = s\noutput_dir = o\nanalysis.preset = feature_effects\n"
        "analysis.output.intermediate_results = PcFinder\n",
        ".");
    CHECK_NOTHROW(build_pipeline(config));
    Config bad = load_config(
        "source_tree = s\noutput_dir = o\nanalysis.preset = metrics\n"
        "analysis.output.intermediate_results = PcFinder\n",
        ".");
    CHECK_THROWS_AS(build_pipeline(bad), Error);
}

TEST_CASE("instance file stems") {
    CHECK(instance_file_stem("PcFinder") == "pc_finder");
    CHECK(instance_file_stem("FeatureEffects") == "feature_effects");
    CHECK(instance_file_stem("DeadBlocks") == "dead_blocks");
    CHECK(instance_file_stem("BlockMetrics") == "block_metrics");
    CHECK(instance_file_stem("PcFinder_2") == "pc_finder_2");
}
