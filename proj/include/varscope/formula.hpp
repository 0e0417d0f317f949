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
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varscope {

enum class FormulaKind { True, False, Var, Not, And, Or };

/// Immutable propositional formula over named variables. Copies share the
/// underlying node, so Formula values are cheap to pass around and safe to
/// read from concurrent threads.
///
/// Conjunction/Disjunction nodes always have >= 2 operands; the factory
/// functions collapse singletons and map empty operand lists to the neutral
/// constant.
class Formula {
public:
    /// Defaults to the constant true.
    Formula();

    static Formula constant(bool value);
    static Formula var(std::string name);

    FormulaKind kind() const { return node_->kind; }
    bool is_constant() const {
        return node_->kind == FormulaKind::True || node_->kind == FormulaKind::False;
    }
    /// Valid for Var nodes only.
    const std::string& var_name() const { return node_->name; }
    /// Valid for Not/And/Or nodes; Not has exactly one operand.
    std::span<const Formula> operands() const { return node_->operands; }

    /// Structural equality: same kind, same name, pairwise-equal operands in
    /// order. And(a,b,c) != And(And(a,b),c).
    friend bool operator==(const Formula& lhs, const Formula& rhs);
    friend bool operator!=(const Formula& lhs, const Formula& rhs) { return !(lhs == rhs); }

private:
    struct Node {
        FormulaKind kind;
        std::string name;             // Var only
        std::vector<Formula> operands;  // Not/And/Or
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(FormulaKind kind, std::string name, std::vector<Formula> ops);

    std::shared_ptr<const Node> node_;

    friend Formula neg(Formula f);
    friend Formula conj(std::vector<Formula> ops);
    friend Formula disj(std::vector<Formula> ops);
};

Formula neg(Formula f);
/// Empty list yields true, a single operand is returned unchanged, otherwise
/// an And node in construction order. Does not flatten nested conjunctions.
Formula conj(std::vector<Formula> ops);
inline Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
/// Empty list yields false; otherwise as conj() with Or.
Formula disj(std::vector<Formula> ops);
inline Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }

/// As conj()/disj(), but operands that are themselves And/Or nodes of the
/// same kind are spliced in. The extractors build conditions through these so
/// that everything they emit stays in the flattened form the formula text
/// parser produces (see parse_formula).
Formula conj_flat(std::vector<Formula> ops);
Formula disj_flat(std::vector<Formula> ops);

using Assignment = std::map<std::string, bool>;

/// Standard propositional semantics; throws UnmappedVariable when f mentions
/// a variable absent from a.
bool eval(const Formula& f, const Assignment& a);

/// Equivalent formula with: constant folding, double-negation elimination,
/// flattening of nested same-kind And/Or, removal of duplicate operands
/// (first occurrence kept), singleton collapse. Not a minimizer.
Formula simplify(const Formula& f);

/// simplify() of f with every occurrence of var replaced by value; the result
/// never mentions var.
Formula substitute(const Formula& f, const std::string& var, bool value);

void collect_vars(const Formula& f, std::set<std::string>& out);
std::set<std::string> collect_vars(const Formula& f);
bool mentions_var(const Formula& f, const std::string& var);

/// Text form: `true`, `false`, names, `!x`, n-ary And/Or as left-associative
/// fully parenthesized binary `(a && b)` / `(a || b)`.
std::string render(const Formula& f);

/// Parses the render() form. Chains of the same operator are flattened into
/// one n-ary node, so parse_formula(render(f)) == f for every formula whose
/// same-kind nodes are not directly nested (render cannot distinguish
/// And(And(a,b),c) from And(a,b,c)).
Formula parse_formula(std::string_view text);

}  // namespace varscope
