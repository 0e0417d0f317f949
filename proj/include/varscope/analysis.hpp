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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varscope/build_extractor.hpp"
#include "varscope/code_model.hpp"
#include "varscope/result_table.hpp"
#include "varscope/varmodel.hpp"

namespace varscope {

/// Per-feature index over the distinct combined presence conditions, keyed by
/// the rendered text of the (simplified) formula for deterministic iteration.
/// Opaque U_* atoms and _MODULE companions never become index keys.
struct PcIndex {
    std::map<std::string, std::map<std::string, Formula>> by_feature;

    std::vector<Formula> pcs_of(const std::string& feature) const;
};

/// Discovers all presence conditions: for each code block with code PC c in
/// file F the combined PC is simplify(c && build PC of F) when a build model
/// is wired, else simplify(c). Consumption is incremental per file; the table
/// is sorted by (file, line) at finish, so arrival order does not matter.
class PcFinder {
public:
    PcFinder(const BuildModel* build, BuildOptions build_opts);

    void consume(const CodeModel& model);
    ResultTable finish();

    const PcIndex& index() const { return index_; }
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    const BuildModel* build_;
    BuildOptions build_opts_;
    PcIndex index_;
    ResultTable table_;
    std::set<std::string> unknown_atoms_;
    std::vector<std::string> diagnostics_;
};

/// FE(f) = simplify of the disjunction, over f's distinct PCs phi, of the
/// Boolean difference phi[f:=true] XOR phi[f:=false] (the condition under
/// which toggling f changes whether the block is included). One row per
/// feature, sorted by name; features with an empty PC set do not appear.
ResultTable feature_effects(const PcIndex& index);

/// A block is dead iff vm constraint && build PC && code PC is unsatisfiable.
/// Blocks whose PC mentions an opaque atom are reported Alive with an
/// `undecidable` note instead of a verdict guess.
class DeadBlocks {
public:
    DeadBlocks() = default;

    void consume(const CodeModel& model);
    ResultTable finish(const VariabilityModel& vm, const BuildModel& build,
                       const BuildOptions& build_opts);

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    struct Entry {
        std::string file;
        int line = 0;
        Formula code_pc;
        bool opaque = false;
    };
    std::vector<Entry> entries_;
    std::set<std::string> unknown_atoms_;
    std::vector<std::string> diagnostics_;
};

/// Per-file block count, deepest nesting and lines covered by at least one
/// block (overlaps counted once); sorted by file path.
class BlockMetrics {
public:
    BlockMetrics();

    void consume(const CodeModel& model);
    ResultTable finish();

private:
    ResultTable table_;
};

}  // namespace varscope
