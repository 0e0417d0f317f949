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

#include "varscope/solver.hpp"

#include <cstdint>
#include <vector>

namespace varscope {

namespace {

constexpr int8_t kUnassigned = -1;

class Dpll {
public:
    Dpll(int nvars, std::vector<std::vector<int>> clauses)
        : nvars_(nvars), clauses_(std::move(clauses)) {}

    bool run(std::vector<int8_t>& assignment) {
        assignment.assign(nvars_ + 1, kUnassigned);
        if (!search(assignment)) return false;
        for (int v = 1; v <= nvars_; ++v)
            if (assignment[v] == kUnassigned) assignment[v] = 0;
        return true;
    }

private:
    static bool literal_true(int lit, const std::vector<int8_t>& a) {
        int8_t v = a[std::abs(lit)];
        return v != kUnassigned && (v == 1) == (lit > 0);
    }
    static bool literal_false(int lit, const std::vector<int8_t>& a) {
        int8_t v = a[std::abs(lit)];
        return v != kUnassigned && (v == 1) != (lit > 0);
    }

    // Unit propagation to fixpoint; false on conflict.
    bool propagate(std::vector<int8_t>& a) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& clause : clauses_) {
                int unassigned_lit = 0;
                int unassigned_count = 0;
                bool satisfied = false;
                for (int lit : clause) {
                    if (literal_true(lit, a)) { satisfied = true; break; }
                    if (!literal_false(lit, a)) {
                        ++unassigned_count;
                        unassigned_lit = lit;
                    }
                }
                if (satisfied) continue;
                if (unassigned_count == 0) return false;
                if (unassigned_count == 1) {
                    a[std::abs(unassigned_lit)] = unassigned_lit > 0 ? 1 : 0;
                    changed = true;
                }
            }
        }
        return true;
    }

    // Assigns variables that occur with one polarity (or not at all) in the
    // clauses not yet satisfied; returns true when it assigned something.
    bool eliminate_pure(std::vector<int8_t>& a) const {
        std::vector<uint8_t> polarity(nvars_ + 1, 0);  // bit0 positive, bit1 negative
        for (const auto& clause : clauses_) {
            bool satisfied = false;
            for (int lit : clause)
                if (literal_true(lit, a)) { satisfied = true; break; }
            if (satisfied) continue;
            for (int lit : clause) {
                if (!literal_false(lit, a))
                    polarity[std::abs(lit)] |= lit > 0 ? 1 : 2;
            }
        }
        bool assigned = false;
        for (int v = 1; v <= nvars_; ++v) {
            if (a[v] != kUnassigned) continue;
            if (polarity[v] == 1) { a[v] = 1; assigned = true; }
            else if (polarity[v] == 2 || polarity[v] == 0) { a[v] = 0; assigned = true; }
        }
        return assigned;
    }

    bool all_satisfied(const std::vector<int8_t>& a) const {
        for (const auto& clause : clauses_) {
            bool satisfied = false;
            for (int lit : clause)
                if (literal_true(lit, a)) { satisfied = true; break; }
            if (!satisfied) return false;
        }
        return true;
    }

    bool search(std::vector<int8_t>& a) const {
        while (true) {
            if (!propagate(a)) return false;
            if (!eliminate_pure(a)) break;
        }
        if (all_satisfied(a)) return true;
        int branch = 0;
        for (int v = 1; v <= nvars_; ++v)
            if (a[v] == kUnassigned) { branch = v; break; }
        if (branch == 0) return false;  // fully assigned but some clause false
        for (int8_t value : {int8_t{1}, int8_t{0}}) {
            std::vector<int8_t> trail = a;
            trail[branch] = value;
            if (search(trail)) {
                a = std::move(trail);
                return true;
            }
        }
        return false;
    }

    int nvars_;
    std::vector<std::vector<int>> clauses_;
};

}  // namespace

SolveResult solve(const CnfProblem& p) {
    const int nvars = static_cast<int>(p.index_to_name.size());
    std::vector<std::vector<int>> clauses;
    clauses.reserve(p.clauses.size());
    for (const auto& clause : p.clauses) {
        std::vector<int> ints;
        ints.reserve(clause.size());
        for (const auto& lit : clause) {
            int idx = p.index_of(lit.var);
            ints.push_back(lit.positive ? idx : -idx);
        }
        clauses.push_back(std::move(ints));
    }

    Dpll dpll(nvars, std::move(clauses));
    std::vector<int8_t> assignment;
    SolveResult result;
    result.sat = dpll.run(assignment);
    if (result.sat) {
        for (const auto& [name, info] : p.var_map)
            result.model[name] = assignment[info.index] == 1;
    }
    return result;
}

bool is_satisfiable(const Formula& f) {
    return solve(to_cnf(f)).sat;
}

bool is_tautology(const Formula& f) {
    return !is_satisfiable(neg(f));
}

bool equivalent(const Formula& lhs, const Formula& rhs) {
    Formula differs = disj(conj(lhs, neg(rhs)), conj(neg(lhs), rhs));
    return !is_satisfiable(differs);
}

}  // namespace varscope
