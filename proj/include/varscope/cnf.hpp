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
#include <string>
#include <vector>

#include "varscope/formula.hpp"

namespace varscope {

struct Literal {
    std::string var;
    bool positive = true;

    friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Clause set plus the bijection variable name <-> positive DIMACS index.
/// Variables introduced by the Tseitin transformation carry the reserved
/// "__t" prefix and are flagged internal.
struct CnfProblem {
    struct VarInfo {
        int index = 0;
        bool internal = false;
    };

    std::vector<Clause> clauses;
    std::map<std::string, VarInfo> var_map;
    std::vector<std::string> index_to_name;  // index_to_name[i-1] is variable i

    int index_of(const std::string& name) const;
    int add_var(const std::string& name, bool internal);
};

/// Reserved prefix for Tseitin auxiliaries; feature extractors never emit
/// names starting with "__".
inline constexpr const char* kAuxVarPrefix = "__t";

/// Tseitin transformation. The result is equisatisfiable with f (not
/// necessarily equivalent) and linear in its node count. Constants are folded
/// first; a constant-false input yields the single empty clause. Deterministic:
/// identical formulas produce identical clause order, variable indices and
/// auxiliary names.
CnfProblem to_cnf(const Formula& f);

/// Standard DIMACS CNF text. Variable names are emitted as "c <index> <name>"
/// comment lines before the "p cnf <vars> <clauses>" header; clauses are
/// one per line, 0-terminated.
std::string to_dimacs(const CnfProblem& p);

}  // namespace varscope
