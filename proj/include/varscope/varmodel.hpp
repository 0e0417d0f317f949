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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "varscope/formula.hpp"

namespace varscope {

enum class FeatureKind { Bool, Tristate };

struct ConstraintOrigin {
    std::string file;
    int line = 0;
};

/// Declared features plus one propositional constraint. Tristate features
/// contribute a companion <name>_MODULE variable and the exclusion
/// !(X && X_MODULE); `depends on` and `select` translate to implications.
struct VariabilityModel {
    std::map<std::string, FeatureKind> features;
    /// Individual translated constraints, in declaration order.
    std::vector<Formula> constraints;
    /// Parallel to `constraints`: where each one came from.
    std::vector<ConstraintOrigin> source_positions;
    /// simplify() of the conjunction of `constraints` (true when empty).
    Formula constraint = Formula::constant(true);
    /// Kconfig files actually read (source includes followed); input set for
    /// the cache fingerprint.
    std::vector<std::string> source_files;

    bool is_tristate(const std::string& name) const {
        auto it = features.find(name);
        return it != features.end() && it->second == FeatureKind::Tristate;
    }
    /// All solver-visible variables: features plus _MODULE companions.
    std::vector<std::string> variables() const;
};

struct VarModelOptions {
    /// Auto-declare referenced-but-undeclared names as Bool instead of
    /// failing; each downgrade is reported through the warnings list.
    bool allow_undeclared = false;
};

/// Parses the Kconfig-subset files in order. Grammar: `config NAME` blocks
/// with indented `bool`/`tristate` (optional prompt), `depends on <expr>`,
/// `select NAME [if <expr>]`, `default y|n|m [if <expr>]`; `source "path"`
/// inclusion (relative to the including file). Declarations are collected in
/// a first pass, so forward references are fine.
VariabilityModel extract_varmodel(const std::vector<std::filesystem::path>& files,
                                  const VarModelOptions& opts,
                                  std::vector<std::string>* warnings = nullptr);

/// All assignments over the model's variables satisfying the constraint,
/// lexicographically ordered by variable name with false before true.
/// Throws TooLarge when the variable count exceeds 2 * bound.
std::vector<Assignment> valid_configurations(const VariabilityModel& vm, int bound = 16);

}  // namespace varscope
