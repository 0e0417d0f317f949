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

#include "varscope/cnf.hpp"

#include "varscope/error.hpp"

namespace varscope {

int CnfProblem::index_of(const std::string& name) const {
    auto it = var_map.find(name);
    if (it == var_map.end())
        throw Error(ErrorCategory::Analysis, "UnmappedVariable",
                    "variable '" + name + "' not in var_map");
    return it->second.index;
}

int CnfProblem::add_var(const std::string& name, bool internal) {
    auto it = var_map.find(name);
    if (it != var_map.end()) return it->second.index;
    int index = static_cast<int>(index_to_name.size()) + 1;
    var_map.emplace(name, VarInfo{index, internal});
    index_to_name.push_back(name);
    return index;
}

namespace {

class TseitinBuilder {
public:
    explicit TseitinBuilder(CnfProblem& out) : out_(out) {}

    Literal build(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::Var:
                out_.add_var(f.var_name(), false);
                return {f.var_name(), true};
            case FormulaKind::Not: {
                Literal l = build(f.operands().front());
                return {l.var, !l.positive};
            }
            case FormulaKind::And:
            case FormulaKind::Or: {
                std::vector<Literal> parts;
                parts.reserve(f.operands().size());
                for (const auto& op : f.operands()) parts.push_back(build(op));
                std::string aux = kAuxVarPrefix + std::to_string(++aux_count_);
                out_.add_var(aux, true);
                Literal gate{aux, true};
                if (f.kind() == FormulaKind::And) {
                    // gate -> part_i, and (all parts) -> gate.
                    for (const auto& p : parts)
                        out_.clauses.push_back({{gate.var, false}, p});
                    Clause back;
                    for (const auto& p : parts) back.push_back({p.var, !p.positive});
                    back.push_back(gate);
                    out_.clauses.push_back(std::move(back));
                } else {
                    // gate -> some part, and part_i -> gate.
                    Clause fwd;
                    fwd.push_back({gate.var, false});
                    for (const auto& p : parts) fwd.push_back(p);
                    out_.clauses.push_back(std::move(fwd));
                    for (const auto& p : parts)
                        out_.clauses.push_back({{p.var, !p.positive}, gate});
                }
                return gate;
            }
            default:
                // Constants are folded away before build() is called.
                throw Error(ErrorCategory::Analysis, "InternalError",
                            "constant reached Tseitin gate construction");
        }
    }

private:
    CnfProblem& out_;
    int aux_count_ = 0;
};

}  // namespace

CnfProblem to_cnf(const Formula& f) {
    CnfProblem out;
    Formula reduced = simplify(f);
    if (reduced.kind() == FormulaKind::True) return out;  // empty clause set
    if (reduced.kind() == FormulaKind::False) {
        out.clauses.push_back({});  // the empty clause: unsatisfiable
        return out;
    }
    TseitinBuilder builder(out);
    Literal root = builder.build(reduced);
    out.clauses.push_back({root});
    return out;
}

std::string to_dimacs(const CnfProblem& p) {
    std::string out;
    for (size_t i = 0; i < p.index_to_name.size(); ++i) {
        out += "c " + std::to_string(i + 1) + " " + p.index_to_name[i] + "\n";
    }
    out += "p cnf " + std::to_string(p.index_to_name.size()) + " " +
           std::to_string(p.clauses.size()) + "\n";
    for (const auto& clause : p.clauses) {
        std::string line;
        for (const auto& lit : clause) {
            int idx = p.index_of(lit.var);
            line += std::to_string(lit.positive ? idx : -idx);
            line += ' ';
        }
        line += "0\n";
        out += line;
    }
    return out;
}

}  // namespace varscope
