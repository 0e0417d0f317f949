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

#include "varscope/result_table.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "varscope/error.hpp"

namespace varscope {

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw Error(ErrorCategory::Analysis, "RowArity",
                    "table '" + name + "' expects " + std::to_string(columns.size()) +
                        " cells, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
}

namespace {

// Ints compare numerically, everything else by its text form.
int compare_cells(const Cell& a, const Cell& b) {
    if (std::holds_alternative<int64_t>(a) && std::holds_alternative<int64_t>(b)) {
        int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
        return x < y ? -1 : x > y ? 1 : 0;
    }
    return cell_text(a).compare(cell_text(b));
}

}  // namespace

void ResultTable::sort_rows() {
    std::stable_sort(rows.begin(), rows.end(),
                     [this](const std::vector<Cell>& a, const std::vector<Cell>& b) {
                         for (size_t col : key_columns) {
                             int c = compare_cells(a[col], b[col]);
                             if (c != 0) return c < 0;
                         }
                         return false;
                     });
}

std::string cell_text(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* i = std::get_if<int64_t>(&cell)) return std::to_string(*i);
    return render(std::get<Formula>(cell));
}

namespace {

std::string csv_quote(const std::string& value) {
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_header_cell(const std::string& name) {
    if (name.find_first_of(",\"\n") == std::string::npos) return name;
    return csv_quote(name);
}

const char* column_kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Text: return "Text";
        case ColumnKind::Int: return "Int";
        case ColumnKind::Formula: return "Formula";
    }
    return "Text";
}

}  // namespace

std::string to_csv(const ResultTable& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) out += ',';
        out += csv_header_cell(t.columns[i].first);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            if (t.columns[i].second == ColumnKind::Int)
                out += cell_text(row[i]);
            else
                out += csv_quote(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ResultTable& t) {
    nlohmann::ordered_json doc;
    doc["name"] = t.name;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& [name, kind] : t.columns)
        doc["columns"].push_back({{"name", name}, {"kind", column_kind_name(kind)}});
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json json_row = nlohmann::ordered_json::array();
        for (size_t i = 0; i < row.size(); ++i) {
            if (t.columns[i].second == ColumnKind::Int)
                json_row.push_back(std::get<int64_t>(row[i]));
            else
                json_row.push_back(cell_text(row[i]));
        }
        doc["rows"].push_back(std::move(json_row));
    }
    return doc.dump(2) + "\n";
}

}  // namespace varscope
