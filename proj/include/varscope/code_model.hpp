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

#include <set>
#include <string>
#include <vector>

#include "varscope/formula.hpp"

namespace varscope {

enum class BranchKind { If, Elif, Else, Ifdef, Ifndef };

struct CodeBlock;

/// Node of the per-file element tree. A block spans from its opening
/// directive line to the line before the directive that terminates its
/// branch, so sibling branches of one #if chain never overlap.
struct CodeElement {
    std::string file;
    int line_start = 1;
    int line_end = 1;
    /// This element's immediate condition; True for the file root.
    Formula condition = Formula::constant(true);
    /// simplify(parent PC && condition); True for the file root.
    Formula presence_condition = Formula::constant(true);
    std::vector<CodeBlock> children;
};

struct CodeBlock : CodeElement {
    BranchKind branch_kind = BranchKind::If;
};

/// Element tree for one source file plus the opaque atoms minted while
/// parsing unsupported condition subexpressions.
struct CodeModel {
    std::string file;
    CodeElement root;
    std::set<std::string> unknown_atoms;
};

struct PresenceEntry {
    std::string file;
    int line = 0;  // block line_start
    Formula pc;
};

/// Depth-first pre-order over all blocks (root excluded); pc values are
/// already simplified.
std::vector<PresenceEntry> presence_conditions(const CodeModel& m);

const char* branch_kind_name(BranchKind kind);

}  // namespace varscope
