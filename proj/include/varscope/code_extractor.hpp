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

#include <string>
#include <string_view>

#include "varscope/code_model.hpp"

namespace varscope {

struct ExtractOptions {
    /// Stripped from identifiers inside conditions so code-space names join
    /// the variability-model namespace.
    std::string variability_prefix = "CONFIG_";
};

/// Parses the expression following #if/#elif (for #ifdef/#ifndef the caller
/// wraps the identifier as defined()). Supported grammar: defined(X) /
/// defined X, identifiers, !, &&, ||, parentheses. Any maximal subexpression
/// outside the grammar becomes an opaque variable U_<fnv1a64-hex> recorded in
/// unknown_atoms; so do identifiers starting with the reserved "__" prefix.
///
/// Throws MalformedExpression on unbalanced parentheses, empty expressions or
/// dangling operators. file/line only position the error message.
Formula parse_cpp_condition(std::string_view text, const ExtractOptions& opts,
                            std::set<std::string>& unknown_atoms,
                            const std::string& file = {}, int line = 0);

/// Builds the element tree for one source file. Pure function of
/// (source, opts): directives hidden in comments or string literals are
/// ignored, backslash continuations are joined, #elif/#else conditions are
/// derived from the chain's prior raw conditions.
CodeModel extract_file(std::string_view source, const std::string& file,
                       const ExtractOptions& opts);

}  // namespace varscope
