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

#include <algorithm>

#include "support/test_util.hpp"
#include "varscope/cnf.hpp"
#include "varscope/solver.hpp"

using namespace varscope;
using namespace varscope::test;

namespace {

const Formula A = Formula::var("A");
const Formula B = Formula::var("B");

bool clause_satisfied(const Clause& clause, const Assignment& model) {
    for (const auto& lit : clause) {
        auto it = model.find(lit.var);
        REQUIRE(it != model.end());
        if (it->second == lit.positive) return true;
    }
    return false;
}

CnfProblem make_problem(const std::vector<std::vector<std::pair<std::string, bool>>>& clauses) {
    CnfProblem p;
    for (const auto& clause : clauses) {
        Clause c;
        for (const auto& [var, positive] : clause) {
            p.add_var(var, false);
            c.push_back({var, positive});
        }
        p.clauses.push_back(std::move(c));
    }
    return p;
}

}  // namespace

TEST_CASE("to_cnf of an atom is a unit clause") {
    CnfProblem p = to_cnf(A);
    REQUIRE(p.clauses.size() == 1);
    CHECK(p.clauses[0] == Clause{{"A", true}});
    CHECK(p.var_map.at("A").index == 1);
    CHECK_FALSE(p.var_map.at("A").internal);
}

TEST_CASE("to_cnf of a disjunction is the Tseitin OR gate") {
    CnfProblem p = to_cnf(disj(A, B));
    REQUIRE(p.clauses.size() == 4);
    CHECK(p.clauses[0] == Clause{{"__t1", false}, {"A", true}, {"B", true}});
    CHECK(p.clauses[1] == Clause{{"A", false}, {"__t1", true}});
    CHECK(p.clauses[2] == Clause{{"B", false}, {"__t1", true}});
    CHECK(p.clauses[3] == Clause{{"__t1", true}});
    CHECK(p.var_map.at("__t1").internal);
    CHECK(p.var_map.at("A").index == 1);
    CHECK(p.var_map.at("B").index == 2);
    CHECK(p.var_map.at("__t1").index == 3);
}

TEST_CASE("to_cnf constants") {
    CHECK(to_cnf(Formula::constant(true)).clauses.empty());
    CnfProblem f = to_cnf(Formula::constant(false));
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0].empty());
}

TEST_CASE("to_cnf is deterministic and linear") {
    RandomFormulaGen gen(77, 8);
    for (int i = 0; i < 100; ++i) {
        Formula f = gen.gen(6);
        CnfProblem p1 = to_cnf(f);
        CnfProblem p2 = to_cnf(f);
        CHECK(p1.clauses == p2.clauses);
        CHECK(p1.index_to_name == p2.index_to_name);
    }
}

TEST_CASE("solve finds contradictions and models") {
    CnfProblem contradiction = make_problem({{{"A", true}}, {{"A", false}}});
    CHECK_FALSE(solve(contradiction).sat);

    CnfProblem simple = make_problem({{{"A", true}, {"B", true}}});
    SolveResult r = solve(simple);
    REQUIRE(r.sat);
    CHECK(clause_satisfied(simple.clauses[0], r.model));
    CHECK(r.model.size() == 2);  // assigns every var_map variable
}

TEST_CASE("solve on the empty clause set") {
    CnfProblem empty;
    SolveResult r = solve(empty);
    CHECK(r.sat);
    CHECK(r.model.empty());
}

TEST_CASE("pigeonhole PHP(3,2) is unsatisfiable") {
    // p_{i,h}: pigeon i sits in hole h. Each pigeon somewhere; no two share.
    auto var = [](int pigeon, int hole) {
        return "p" + std::to_string(pigeon) + std::to_string(hole);
    };
    std::vector<std::vector<std::pair<std::string, bool>>> clauses;
    for (int i = 0; i < 3; ++i) clauses.push_back({{var(i, 0), true}, {var(i, 1), true}});
    for (int h = 0; h < 2; ++h)
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                clauses.push_back({{var(i, h), false}, {var(j, h), false}});
    CnfProblem php = make_problem(clauses);
    CHECK(php.index_to_name.size() == 6);

    // Independent check: exhaustive over 2^6 assignments.
    bool brute_sat = false;
    std::vector<std::string> vars = php.index_to_name;
    std::sort(vars.begin(), vars.end());
    for_each_assignment(vars, [&](const Assignment& a) {
        bool all = true;
        for (const auto& clause : php.clauses) {
            bool sat = false;
            for (const auto& lit : clause)
                if (a.at(lit.var) == lit.positive) sat = true;
            if (!sat) all = false;
        }
        if (all) brute_sat = true;
    });
    CHECK_FALSE(brute_sat);
    CHECK_FALSE(solve(php).sat);
}

TEST_CASE("solver models satisfy every clause (soundness)") {
    RandomFormulaGen gen(4242, 9);
    for (int i = 0; i < 200; ++i) {
        CnfProblem p = to_cnf(gen.gen(6));
        SolveResult r = solve(p);
        if (!r.sat) continue;
        for (const auto& clause : p.clauses) CHECK(clause_satisfied(clause, r.model));
    }
}

TEST_CASE("tseitin equisatisfiability against the truth table, 200 random formulas") {
    RandomFormulaGen gen(20260101, 10);
    for (int i = 0; i < 200; ++i) {
        Formula f = gen.gen(6);
        CAPTURE(render(f));
        CHECK(solve(to_cnf(f)).sat == brute_satisfiable(f));
    }
}

TEST_CASE("is_satisfiable / is_tautology basics") {
    CHECK(is_tautology(disj(A, neg(A))));
    CHECK_FALSE(is_satisfiable(conj(A, neg(A))));
    CHECK(is_satisfiable(conj(A, B)));
    CHECK_FALSE(is_tautology(A));
}

TEST_CASE("is_satisfiable / is_tautology agree with the truth table") {
    RandomFormulaGen gen(5150, 12);
    for (int i = 0; i < 500; ++i) {
        Formula f = gen.gen(6);
        CAPTURE(render(f));
        CHECK(is_satisfiable(f) == brute_satisfiable(f));
        CHECK(is_tautology(f) == brute_tautology(f));
    }
}

TEST_CASE("to_dimacs format") {
    CnfProblem p = make_problem({{{"A", true}, {"B", false}}});
    CHECK(to_dimacs(p) == "c 1 A\nc 2 B\np cnf 2 1\n1 -2 0\n");
    CHECK(to_dimacs(CnfProblem{}) == "p cnf 0 0\n");
}

TEST_CASE("to_dimacs round-trips through an independent reader") {
    RandomFormulaGen gen(31337, 8);
    for (int i = 0; i < 100; ++i) {
        CnfProblem p = to_cnf(gen.gen(5));
        DimacsDoc doc = parse_dimacs(to_dimacs(p));
        CHECK(doc.nvars == static_cast<int>(p.index_to_name.size()));
        REQUIRE(doc.clauses.size() == p.clauses.size());
        for (size_t c = 0; c < p.clauses.size(); ++c) {
            std::vector<int> expected;
            for (const auto& lit : p.clauses[c]) {
                int idx = p.index_of(lit.var);
                expected.push_back(lit.positive ? idx : -idx);
            }
            CHECK(doc.clauses[c] == expected);
        }
        for (const auto& [name, info] : p.var_map) CHECK(doc.names.at(info.index) == name);
    }
}
