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

#include "varscope/analysis.hpp"

#include <algorithm>
#include <cctype>

#include "varscope/solver.hpp"

namespace varscope {

namespace {

bool looks_like_opaque_atom(const std::string& name) {
    if (name.rfind("U_", 0) != 0 || name.size() != 18) return false;
    for (size_t i = 2; i < name.size(); ++i) {
        char c = name[i];
        if (!std::isdigit(static_cast<unsigned char>(c)) && (c < 'a' || c > 'f')) return false;
    }
    return true;
}

bool is_feature_variable(const std::string& name, const std::set<std::string>& unknown_atoms) {
    if (name.ends_with("_MODULE")) return false;
    if (unknown_atoms.count(name)) return false;
    if (looks_like_opaque_atom(name)) return false;
    return true;
}

bool mentions_opaque(const Formula& f, const std::set<std::string>& unknown_atoms) {
    for (const auto& var : collect_vars(f))
        if (unknown_atoms.count(var) || looks_like_opaque_atom(var)) return true;
    return false;
}

}  // namespace

std::vector<Formula> PcIndex::pcs_of(const std::string& feature) const {
    std::vector<Formula> out;
    auto it = by_feature.find(feature);
    if (it == by_feature.end()) return out;
    out.reserve(it->second.size());
    for (const auto& [text, formula] : it->second) out.push_back(formula);
    return out;
}

PcFinder::PcFinder(const BuildModel* build, BuildOptions build_opts)
    : build_(build), build_opts_(std::move(build_opts)) {
    table_.name = "PcFinder";
    table_.columns = {{"file", ColumnKind::Text},
                      {"line", ColumnKind::Int},
                      {"pc", ColumnKind::Formula}};
    table_.key_columns = {0, 1};
}

void PcFinder::consume(const CodeModel& model) {
    unknown_atoms_.insert(model.unknown_atoms.begin(), model.unknown_atoms.end());
    Formula file_pc = Formula::constant(true);
    if (build_) file_pc = lookup_pc(*build_, model.file, build_opts_, &diagnostics_);

    for (const auto& entry : presence_conditions(model)) {
        Formula combined =
            build_ ? simplify(conj(entry.pc, file_pc)) : entry.pc;
        table_.add_row({entry.file, int64_t{entry.line}, combined});
        if (combined.kind() == FormulaKind::False) continue;  // recorded, never indexed
        for (const auto& var : collect_vars(combined)) {
            if (!is_feature_variable(var, unknown_atoms_)) continue;
            index_.by_feature[var].emplace(render(combined), combined);
        }
    }
}

ResultTable PcFinder::finish() {
    table_.sort_rows();
    return std::move(table_);
}

ResultTable feature_effects(const PcIndex& index) {
    ResultTable table;
    table.name = "FeatureEffects";
    table.columns = {{"feature", ColumnKind::Text}, {"effect", ColumnKind::Formula}};
    table.key_columns = {0};
    for (const auto& [feature, pcs] : index.by_feature) {
        std::vector<Formula> disjuncts;
        disjuncts.reserve(pcs.size());
        for (const auto& [text, pc] : pcs) {
            Formula on = substitute(pc, feature, true);
            Formula off = substitute(pc, feature, false);
            // Boolean difference of pc by the feature: toggling the feature
            // flips this block exactly when on != off. The mirror term folds
            // to false for conditions where the feature occurs positively.
            disjuncts.push_back(disj(conj(on, neg(off)), conj(neg(on), off)));
        }
        table.add_row({feature, simplify(disj(std::move(disjuncts)))});
    }
    table.sort_rows();
    return table;
}

void DeadBlocks::consume(const CodeModel& model) {
    unknown_atoms_.insert(model.unknown_atoms.begin(), model.unknown_atoms.end());
    for (const auto& entry : presence_conditions(model))
        entries_.push_back({entry.file, entry.line, entry.pc, false});
}

ResultTable DeadBlocks::finish(const VariabilityModel& vm, const BuildModel& build,
                               const BuildOptions& build_opts) {
    ResultTable table;
    table.name = "DeadBlocks";
    table.columns = {{"file", ColumnKind::Text},
                     {"line", ColumnKind::Int},
                     {"pc", ColumnKind::Formula},
                     {"verdict", ColumnKind::Text},
                     {"note", ColumnKind::Text}};
    table.key_columns = {0, 1};
    for (const auto& entry : entries_) {
        Formula file_pc = lookup_pc(build, entry.file, build_opts, &diagnostics_);
        Formula combined = simplify(conj(entry.code_pc, file_pc));
        std::string verdict = "Alive";
        std::string note;
        if (mentions_opaque(combined, unknown_atoms_)) {
            note = "undecidable: opaque condition atoms";
            diagnostics_.push_back(entry.file + ":" + std::to_string(entry.line) +
                                   " skipped: opaque condition atoms");
        } else if (!is_satisfiable(conj(vm.constraint, combined))) {
            verdict = "Dead";
        }
        table.add_row({entry.file, int64_t{entry.line}, combined, verdict, note});
    }
    table.sort_rows();
    return table;
}

namespace {

void measure(const CodeBlock& block, int depth, int64_t& count, int64_t& max_depth,
             std::vector<std::pair<int, int>>& spans) {
    ++count;
    max_depth = std::max<int64_t>(max_depth, depth);
    spans.emplace_back(block.line_start, block.line_end);
    for (const auto& child : block.children) measure(child, depth + 1, count, max_depth, spans);
}

int64_t covered_lines(std::vector<std::pair<int, int>> spans) {
    std::sort(spans.begin(), spans.end());
    int64_t covered = 0;
    int current_start = 0, current_end = -1;
    bool open = false;
    for (const auto& [start, end] : spans) {
        if (!open || start > current_end + 1) {
            if (open) covered += current_end - current_start + 1;
            current_start = start;
            current_end = end;
            open = true;
        } else {
            current_end = std::max(current_end, end);
        }
    }
    if (open) covered += current_end - current_start + 1;
    return covered;
}

}  // namespace

BlockMetrics::BlockMetrics() {
    table_.name = "BlockMetrics";
    table_.columns = {{"file", ColumnKind::Text},
                      {"block_count", ColumnKind::Int},
                      {"max_nesting_depth", ColumnKind::Int},
                      {"variable_loc", ColumnKind::Int}};
    table_.key_columns = {0};
}

void BlockMetrics::consume(const CodeModel& model) {
    int64_t count = 0, max_depth = 0;
    std::vector<std::pair<int, int>> spans;
    for (const auto& child : model.root.children)
        measure(child, 1, count, max_depth, spans);
    table_.add_row({model.file, count, max_depth, covered_lines(std::move(spans))});
}

ResultTable BlockMetrics::finish() {
    table_.sort_rows();
    return std::move(table_);
}

}  // namespace varscope
