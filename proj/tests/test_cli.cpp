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

#include <cstdlib>

#include "support/test_util.hpp"

using namespace varscope::test;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    auto bin = env_path("VARSCOPE_BIN");
    TempDir scratch("cli-capture");
    auto capture = scratch.path() / "out.txt";
    std::string command = bin.string() + " " + args + " >" + capture.string() + " 2>&1";
    int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(capture);
    return result;
}

std::string fixture_conf(const std::string& name) {
    return (env_path("VARSCOPE_FIXTURES") / "mini-spl" / "confs" / name).string();
}

}  // namespace

TEST_CASE("cli: run executes the fixture end to end") {
    TempDir out("cli-run");
    CliResult r = run_cli("run " + fixture_conf("feature_effects.properties") +
                          " --output-dir " + out.path().string() + " --jobs 2 --log-level warn");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(out.path() / "feature_effects.csv"));
}

TEST_CASE("cli: validate prints the resolved graph without writing outputs") {
    TempDir out("cli-validate");
    CliResult r = run_cli("validate " + fixture_conf("feature_effects.properties") +
                          " --output-dir " + out.path().string());
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FeatureEffects") != std::string::npos);
    CHECK(r.output.find("[sink]") != std::string::npos);
    CHECK(r.output.find("config fingerprint") != std::string::npos);
    // validate never writes into output_dir.
    CHECK(std::filesystem::is_empty(out.path()));
}

TEST_CASE("cli: validate rejects a DSL typo with a config exit code") {
    TempDir out("cli-typo");
    write_file(out.path() / "bad.properties",
               "source_tree = .\noutput_dir = out\n"
               "analysis.pipeline = FeatureEffects(PcFinder(cmComponent())\n");
    CliResult r = run_cli("validate " + (out.path() / "bad.properties").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("ParseError") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with 64") {
    CHECK(run_cli("").exit_code == 64);
    CHECK(run_cli("run").exit_code == 64);  // missing config argument
    CHECK(run_cli("frobnicate x").exit_code == 64);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: overrides and archive flag") {
    TempDir out("cli-archive");
    CliResult r = run_cli("run " + fixture_conf("metrics.properties") + " --output-dir " +
                          out.path().string() + " --archive -D log.level=error");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(out.path() / "archive.zip"));

    TempDir unpacked("cli-unpack");
    CliResult u = run_cli("unpack " + (out.path() / "archive.zip").string() + " " +
                          unpacked.path().string());
    CAPTURE(u.output);
    CHECK(u.exit_code == 0);
    CHECK(std::filesystem::exists(unpacked.path() / "results" / "block_metrics.csv"));

    CliResult i = run_cli("inspect-cache " + (out.path() / "cache").string());
    CHECK(i.exit_code == 0);
    CHECK(i.output.find("code:") != std::string::npos);
}

TEST_CASE("cli: extraction failures map to exit code 2") {
    TempDir tree("cli-bad");
    write_file(tree.path() / "s" / "bad.c", "#endif\n");
    write_file(tree.path() / "s" / "Makefile", "obj-y += bad.o\n");
    write_file(tree.path() / "conf.properties",
               "source_tree = s\noutput_dir = out\nanalysis.preset = metrics\n");
    CliResult r = run_cli("run " + (tree.path() / "conf.properties").string());
    CAPTURE(r.output);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("UnbalancedDirectives") != std::string::npos);
}
