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
#include "varscope/error.hpp"
#include "varscope/formula.hpp"

using namespace varscope;
using namespace varscope::test;

namespace {
const Formula A = Formula::var("A");
const Formula B = Formula::var("B");
const Formula C = Formula::var("C");
}  // namespace

TEST_CASE("eval follows propositional semantics") {
    CHECK(eval(conj(A, B), {{"A", true}, {"B", true}}));
    CHECK_FALSE(eval(conj(A, B), {{"A", true}, {"B", false}}));
    CHECK_FALSE(eval(neg(A), {{"A", true}}));
    CHECK(eval(Formula::constant(true), {}));
    CHECK_FALSE(eval(Formula::constant(false), {}));
    CHECK(eval(disj(A, B), {{"A", false}, {"B", true}}));
}

TEST_CASE("eval rejects unmapped variables") {
    CHECK_THROWS_WITH_AS(eval(conj(A, B), {{"A", true}}),
                         doctest::Contains("UnmappedVariable"), Error);
}

TEST_CASE("structural equality is order sensitive and shape sensitive") {
    CHECK(conj(A, B) == conj(A, B));
    CHECK(conj(A, B) != conj(B, A));
    CHECK(conj({A, B, C}) != conj(conj(A, B), C));
    CHECK(Formula::var("A") == A);
    CHECK(A != B);
    CHECK(neg(A) != A);
}

TEST_CASE("constructors collapse singletons and empties") {
    CHECK(conj(std::vector<Formula>{}) == Formula::constant(true));
    CHECK(disj(std::vector<Formula>{}) == Formula::constant(false));
    CHECK(conj(std::vector<Formula>{A}) == A);
    CHECK(disj(std::vector<Formula>{A}) == A);
}

TEST_CASE("substitute removes the variable and simplifies") {
    CHECK(substitute(conj(A, B), "A", true) == B);
    CHECK(substitute(conj(A, B), "A", false) == Formula::constant(false));
    CHECK(substitute(C, "A", true) == C);
}

TEST_CASE("substitute never leaves the variable behind") {
    RandomFormulaGen gen(20260811, 6);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen.gen(5);
        for (const char* var : {"F0", "F3"}) {
            CHECK_FALSE(mentions_var(substitute(f, var, i % 2 == 0), var));
        }
    }
}

TEST_CASE("simplify examples") {
    CHECK(simplify(neg(neg(A))) == A);
    CHECK(simplify(conj(A, conj(B, A))) == conj(A, B));
    CHECK(simplify(disj(A, Formula::constant(true))) == Formula::constant(true));
    CHECK(simplify(conj(A, Formula::constant(true))) == A);
    CHECK(simplify(disj(A, Formula::constant(false))) == A);
    CHECK(simplify(conj(A, Formula::constant(false))) == Formula::constant(false));
    // Dedupe keeps the first occurrence; construction order is preserved.
    CHECK(simplify(disj({B, A, B})) == disj(B, A));
    // No minimization beyond the listed rules.
    CHECK(simplify(disj(A, neg(A))) == disj(A, neg(A)));
}

TEST_CASE("simplify preserves semantics (exhaustive over random formulas)") {
    RandomFormulaGen gen(1234, 8);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen.gen(6);
        Formula s = simplify(f);
        CHECK(brute_equivalent(f, s));
        // Idempotent.
        CHECK(simplify(s) == s);
    }
}

TEST_CASE("render matches the documented text form") {
    CHECK(render(Formula::constant(true)) == "true");
    CHECK(render(Formula::constant(false)) == "false");
    CHECK(render(A) == "A");
    CHECK(render(neg(A)) == "!A");
    CHECK(render(neg(neg(A))) == "!!A");
    CHECK(render(conj(A, B)) == "(A && B)");
    CHECK(render(disj(A, B)) == "(A || B)");
    CHECK(render(conj({A, B, C})) == "((A && B) && C)");
    CHECK(render(neg(conj(A, B))) == "!(A && B)");
    CHECK(render(disj(conj(A, B), C)) == "((A && B) || C)");
}

TEST_CASE("parse_formula round-trips canonical formulas") {
    RandomFormulaGen gen(99, 7);
    for (int i = 0; i < 400; ++i) {
        Formula f = gen.gen_canonical(6);
        CAPTURE(render(f));
        CHECK(parse_formula(render(f)) == f);
    }
    // N-ary nodes come back as one flattened node.
    CHECK(parse_formula("((A && B) && C)") == conj({A, B, C}));
    CHECK(parse_formula("A || B || C") == disj({A, B, C}));
    CHECK(parse_formula("!!A") == neg(neg(A)));
    CHECK(parse_formula("true") == Formula::constant(true));
}

TEST_CASE("parse_formula rejects malformed text") {
    CHECK_THROWS_AS(parse_formula(""), Error);
    CHECK_THROWS_AS(parse_formula("A &&"), Error);
    CHECK_THROWS_AS(parse_formula("(A"), Error);
    CHECK_THROWS_AS(parse_formula("A)"), Error);
    CHECK_THROWS_AS(parse_formula("A & B"), Error);
    CHECK_THROWS_AS(parse_formula("A ? B"), Error);
}

TEST_CASE("formulas share structure across copies") {
    Formula f = conj(A, B);
    Formula copy = f;
    CHECK(copy == f);
    CHECK(copy.operands().data() == f.operands().data());
}
