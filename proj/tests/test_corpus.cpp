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

// Golden corpus for the code extractor: every snippet's element tree (or
// error) is pinned byte-exactly, and chains with an else branch additionally
// pass solver-backed exclusivity / coverage checks, independent of the
// goldens.

#include <doctest.h>

#include <filesystem>

#include "support/test_util.hpp"
#include "varscope/cache.hpp"
#include "varscope/code_extractor.hpp"
#include "varscope/error.hpp"
#include "varscope/solver.hpp"

using namespace varscope;
using namespace varscope::test;

namespace fs = std::filesystem;

namespace {

// Walks sibling lists and checks every full if/elif/.../else chain: branch
// conditions are pairwise unsatisfiable together and jointly a tautology.
void check_chains(const std::vector<CodeBlock>& siblings) {
    size_t i = 0;
    while (i < siblings.size()) {
        check_chains(siblings[i].children);
        if (siblings[i].branch_kind == BranchKind::Elif ||
            siblings[i].branch_kind == BranchKind::Else) {
            ++i;
            continue;
        }
        size_t j = i + 1;
        bool has_else = false;
        while (j < siblings.size() && (siblings[j].branch_kind == BranchKind::Elif ||
                                       siblings[j].branch_kind == BranchKind::Else)) {
            has_else = has_else || siblings[j].branch_kind == BranchKind::Else;
            ++j;
        }
        if (has_else) {
            std::vector<Formula> conditions;
            for (size_t k = i; k < j; ++k) conditions.push_back(siblings[k].condition);
            for (size_t a = 0; a < conditions.size(); ++a)
                for (size_t b = a + 1; b < conditions.size(); ++b) {
                    CAPTURE(render(conditions[a]));
                    CAPTURE(render(conditions[b]));
                    CHECK_FALSE(is_satisfiable(conj(conditions[a], conditions[b])));
                }
            CHECK(is_tautology(disj_flat(std::move(conditions))));
        }
        i = j;
    }
}

}  // namespace

TEST_CASE("corpus: extracted trees and errors match the goldens exactly") {
    fs::path corpus = env_path("VARSCOPE_CORPUS");
    fs::path golden = env_path("VARSCOPE_GOLDEN") / "corpus";
    ExtractOptions opts;

    size_t checked = 0;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus))
        if (entry.path().extension() == ".c") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    REQUIRE(files.size() >= 30);

    for (const auto& file : files) {
        std::string stem = file.stem().string();
        CAPTURE(stem);
        std::string source = read_file(file);
        try {
            CodeModel model = extract_file(source, file.filename().string(), opts);
            CHECK(serialize_code_model(model, "") == read_file(golden / (stem + ".json")));
            check_chains(model.root.children);
            ++checked;
        } catch (const Error& e) {
            CHECK(e.code() + " " + std::to_string(e.line()) + "\n" ==
                  read_file(golden / (stem + ".error.txt")));
            ++checked;
        }
    }
    CHECK(checked == files.size());
}

TEST_CASE("fixture driver.c matches its golden element tree") {
    fs::path fixture = env_path("VARSCOPE_FIXTURES") / "mini-spl" / "src" / "driver.c";
    fs::path golden = env_path("VARSCOPE_GOLDEN") / "driver.elements.json";
    CodeModel model = extract_file(read_file(fixture), "driver.c", ExtractOptions{});
    CHECK(serialize_code_model(model, "") == read_file(golden));
}

TEST_CASE("fixture driver.c PCs equal hand-derived formulas (truth-table check)") {
    fs::path fixture = env_path("VARSCOPE_FIXTURES") / "mini-spl" / "src" / "driver.c";
    CodeModel model = extract_file(read_file(fixture), "driver.c", ExtractOptions{});
    auto pcs = presence_conditions(model);

    const Formula NET = Formula::var("NET");
    const Formula TCP = Formula::var("TCP");
    const Formula UDP = Formula::var("UDP");
    const Formula DEBUG = Formula::var("DEBUG");
    const Formula LEGACY = Formula::var("LEGACY");

    // One entry per block in pre-order: (line, independently derived PC).
    std::vector<std::pair<int, Formula>> expected = {
        {4, NET},
        {6, conj(NET, TCP)},
        {8, conj({NET, neg(TCP), UDP})},
        {10, conj({NET, neg(TCP), neg(UDP)})},
        {15, conj(DEBUG, NET)},
        {17, disj(neg(DEBUG), neg(NET))},
        {23, neg(LEGACY)},
        {25, LEGACY},
    };
    REQUIRE(pcs.size() == expected.size());
    for (size_t i = 0; i < pcs.size(); ++i) {
        CAPTURE(i);
        CHECK(pcs[i].line == expected[i].first);
        CAPTURE(render(pcs[i].pc));
        CAPTURE(render(expected[i].second));
        CHECK(equivalent(pcs[i].pc, expected[i].second));
    }
}
