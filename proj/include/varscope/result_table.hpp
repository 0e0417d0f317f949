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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "varscope/formula.hpp"

namespace varscope {

enum class ColumnKind { Text, Int, Formula };

using Cell = std::variant<std::string, int64_t, Formula>;

/// Ordered rows of named, typed columns; every analysis component emits one.
/// Rows are kept sorted by the declared key columns so outputs do not depend
/// on extraction scheduling.
struct ResultTable {
    std::string name;
    std::vector<std::pair<std::string, ColumnKind>> columns;
    std::vector<size_t> key_columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    void sort_rows();
};

/// RFC 4180 CSV: UTF-8, header row, LF endings; Text and Formula cells are
/// always quoted, Int cells are bare.
std::string to_csv(const ResultTable& t);

/// JSON object with `columns` and `rows` arrays in table order.
std::string to_json(const ResultTable& t);

std::string cell_text(const Cell& cell);

}  // namespace varscope
