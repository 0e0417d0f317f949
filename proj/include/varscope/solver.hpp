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

#include <optional>

#include "varscope/cnf.hpp"
#include "varscope/formula.hpp"

namespace varscope {

struct SolveResult {
    bool sat = false;
    /// On Sat, assigns every variable of var_map (internal auxiliaries
    /// included). Empty on Unsat.
    Assignment model;
};

/// DPLL with unit propagation and pure-literal elimination; branches on the
/// lowest var_map index, trying true first. Solver state is per call, so
/// solve() is reentrant and safe to run concurrently.
SolveResult solve(const CnfProblem& p);

bool is_satisfiable(const Formula& f);
bool is_tautology(const Formula& f);

/// Satisfiability of lhs <-> rhs negated; handy for oracle checks.
bool equivalent(const Formula& lhs, const Formula& rhs);

}  // namespace varscope
