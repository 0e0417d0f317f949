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

#include "varscope/formula.hpp"

#include <algorithm>

#include "varscope/error.hpp"

namespace varscope {

Formula Formula::make(FormulaKind kind, std::string name, std::vector<Formula> ops) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->name = std::move(name);
    node->operands = std::move(ops);
    return Formula(std::move(node));
}

Formula::Formula() : Formula(constant(true)) {}

Formula Formula::constant(bool value) {
    // Shared singletons; every constant compares equal anyway.
    static const Formula t = make(FormulaKind::True, {}, {});
    static const Formula f = make(FormulaKind::False, {}, {});
    return value ? t : f;
}

Formula Formula::var(std::string name) {
    if (name.empty())
        throw Error(ErrorCategory::Analysis, "InvalidVariable", "variable name must be non-empty");
    return make(FormulaKind::Var, std::move(name), {});
}

Formula neg(Formula f) {
    return Formula::make(FormulaKind::Not, {}, {std::move(f)});
}

Formula conj(std::vector<Formula> ops) {
    if (ops.empty()) return Formula::constant(true);
    if (ops.size() == 1) return std::move(ops.front());
    return Formula::make(FormulaKind::And, {}, std::move(ops));
}

Formula disj(std::vector<Formula> ops) {
    if (ops.empty()) return Formula::constant(false);
    if (ops.size() == 1) return std::move(ops.front());
    return Formula::make(FormulaKind::Or, {}, std::move(ops));
}

namespace {

Formula combine_flat(FormulaKind kind, std::vector<Formula> ops) {
    std::vector<Formula> flat;
    flat.reserve(ops.size());
    for (auto& op : ops) {
        if (op.kind() == kind) {
            for (const auto& sub : op.operands()) flat.push_back(sub);
        } else {
            flat.push_back(std::move(op));
        }
    }
    return kind == FormulaKind::And ? conj(std::move(flat)) : disj(std::move(flat));
}

}  // namespace

Formula conj_flat(std::vector<Formula> ops) { return combine_flat(FormulaKind::And, std::move(ops)); }
Formula disj_flat(std::vector<Formula> ops) { return combine_flat(FormulaKind::Or, std::move(ops)); }

bool operator==(const Formula& lhs, const Formula& rhs) {
    if (lhs.node_ == rhs.node_) return true;
    if (lhs.kind() != rhs.kind()) return false;
    switch (lhs.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return true;
        case FormulaKind::Var:
            return lhs.var_name() == rhs.var_name();
        case FormulaKind::Not:
        case FormulaKind::And:
        case FormulaKind::Or: {
            auto a = lhs.operands();
            auto b = rhs.operands();
            if (a.size() != b.size()) return false;
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return false;
            return true;
        }
    }
    return false;
}

bool eval(const Formula& f, const Assignment& a) {
    switch (f.kind()) {
        case FormulaKind::True:
            return true;
        case FormulaKind::False:
            return false;
        case FormulaKind::Var: {
            auto it = a.find(f.var_name());
            if (it == a.end())
                throw Error(ErrorCategory::Analysis, "UnmappedVariable",
                            "no value for variable '" + f.var_name() + "'");
            return it->second;
        }
        case FormulaKind::Not:
            return !eval(f.operands().front(), a);
        case FormulaKind::And:
            for (const auto& op : f.operands())
                if (!eval(op, a)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& op : f.operands())
                if (eval(op, a)) return true;
            return false;
    }
    return false;
}

Formula simplify(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Var:
            return f;
        case FormulaKind::Not: {
            Formula inner = simplify(f.operands().front());
            switch (inner.kind()) {
                case FormulaKind::True:
                    return Formula::constant(false);
                case FormulaKind::False:
                    return Formula::constant(true);
                case FormulaKind::Not:
                    return inner.operands().front();  // already simplified
                default:
                    return neg(std::move(inner));
            }
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            const bool is_and = f.kind() == FormulaKind::And;
            const Formula identity = Formula::constant(is_and);
            const Formula annihilator = Formula::constant(!is_and);
            std::vector<Formula> kept;
            for (const auto& op : f.operands()) {
                Formula s = simplify(op);
                if (s == annihilator) return annihilator;
                if (s == identity) continue;
                if (s.kind() == f.kind()) {
                    // One level suffices: s is simplified, so its operands are
                    // not of the same kind again.
                    for (const auto& sub : s.operands()) kept.push_back(sub);
                } else {
                    kept.push_back(std::move(s));
                }
            }
            std::vector<Formula> unique;
            unique.reserve(kept.size());
            for (auto& k : kept) {
                bool seen = false;
                for (const auto& u : unique)
                    if (u == k) { seen = true; break; }
                if (!seen) unique.push_back(std::move(k));
            }
            return is_and ? conj(std::move(unique)) : disj(std::move(unique));
        }
    }
    return f;
}

namespace {

Formula substitute_raw(const Formula& f, const std::string& var, bool value) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Var:
            return f.var_name() == var ? Formula::constant(value) : f;
        case FormulaKind::Not:
            return neg(substitute_raw(f.operands().front(), var, value));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> ops;
            ops.reserve(f.operands().size());
            for (const auto& op : f.operands()) ops.push_back(substitute_raw(op, var, value));
            return f.kind() == FormulaKind::And ? conj(std::move(ops)) : disj(std::move(ops));
        }
    }
    return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::string& var, bool value) {
    return simplify(substitute_raw(f, var, value));
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Var:
            out.insert(f.var_name());
            return;
        case FormulaKind::Not:
        case FormulaKind::And:
        case FormulaKind::Or:
            for (const auto& op : f.operands()) collect_vars(op, out);
            return;
        default:
            return;
    }
}

std::set<std::string> collect_vars(const Formula& f) {
    std::set<std::string> out;
    collect_vars(f, out);
    return out;
}

bool mentions_var(const Formula& f, const std::string& var) {
    switch (f.kind()) {
        case FormulaKind::Var:
            return f.var_name() == var;
        case FormulaKind::Not:
        case FormulaKind::And:
        case FormulaKind::Or:
            for (const auto& op : f.operands())
                if (mentions_var(op, var)) return true;
            return false;
        default:
            return false;
    }
}

}  // namespace varscope
