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

#include "varscope/varmodel.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "varscope/error.hpp"

namespace fs = std::filesystem;

namespace varscope {

std::vector<std::string> VariabilityModel::variables() const {
    std::vector<std::string> vars;
    for (const auto& [name, kind] : features) {
        vars.push_back(name);
        if (kind == FeatureKind::Tristate) vars.push_back(name + "_MODULE");
    }
    std::sort(vars.begin(), vars.end());
    return vars;
}

namespace {

[[noreturn]] void parse_error(const std::string& file, int line, const std::string& message) {
    throw Error(ErrorCategory::Extraction, "ParseError", message, file, line);
}

struct RawLine {
    std::string file;
    int line = 0;
    std::string text;    // trimmed
    bool indented = false;
};

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

bool valid_feature_name(const std::string& name) {
    if (name.empty() || name.rfind("__", 0) == 0) return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

void load_file(const fs::path& path, std::vector<RawLine>& out,
               std::vector<std::string>& source_files) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCategory::Io, "FileRead", "cannot open " + path.string());
    source_files.push_back(path.lexically_normal().generic_string());
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string text = trim_copy(raw);
        if (text.empty()) continue;
        bool indented = std::isspace(static_cast<unsigned char>(raw.front())) != 0;
        std::string display = path.lexically_normal().generic_string();

        if (!indented && text.rfind("source", 0) == 0) {
            std::string rest = trim_copy(text.substr(6));
            if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"')
                parse_error(display, line_no, "source expects a quoted path");
            fs::path included = path.parent_path() / rest.substr(1, rest.size() - 2);
            load_file(included, out, source_files);
            continue;
        }
        out.push_back({display, line_no, std::move(text), indented});
    }
}

struct Property {
    std::string keyword;
    std::string rest;
    std::string file;
    int line = 0;
};

struct ConfigBlock {
    std::string name;
    std::string file;
    int line = 0;
    std::vector<Property> props;
};

std::vector<ConfigBlock> group_blocks(const std::vector<RawLine>& lines) {
    static const char* kRejected[] = {"menu", "endmenu", "menuconfig", "choice",
                                      "endchoice", "if", "endif", "comment", "mainmenu"};
    std::vector<ConfigBlock> blocks;
    for (const auto& raw : lines) {
        std::istringstream ss(raw.text);
        std::string keyword;
        ss >> keyword;
        std::string rest = trim_copy(raw.text.substr(keyword.size()));
        if (!raw.indented) {
            if (keyword == "config") {
                if (!valid_feature_name(rest))
                    parse_error(raw.file, raw.line, "invalid feature name '" + rest + "'");
                blocks.push_back({rest, raw.file, raw.line, {}});
                continue;
            }
            for (const char* rejected : kRejected)
                if (keyword == rejected)
                    parse_error(raw.file, raw.line,
                                "'" + keyword + "' is outside the supported Kconfig subset; see "
                                "the variability-model section of the README");
            parse_error(raw.file, raw.line, "unrecognized construct '" + keyword + "'");
        }
        if (blocks.empty())
            parse_error(raw.file, raw.line, "indented line outside a config block");
        blocks.back().props.push_back({keyword, rest, raw.file, raw.line});
    }
    return blocks;
}

class Translator {
public:
    Translator(const VarModelOptions& opts, std::vector<std::string>* warnings)
        : opts_(opts), warnings_(warnings) {}

    VariabilityModel run(const std::vector<ConfigBlock>& blocks) {
        declare_features(blocks);
        for (const auto& block : blocks) translate_block(block);
        model_.constraint = simplify(conj_flat(model_.constraints));
        return std::move(model_);
    }

private:
    void warn(const std::string& message) {
        if (warnings_) warnings_->push_back(message);
    }

    void declare_features(const std::vector<ConfigBlock>& blocks) {
        for (const auto& block : blocks) {
            FeatureKind kind = FeatureKind::Bool;
            bool typed = false;
            for (const auto& prop : block.props) {
                if (prop.keyword != "bool" && prop.keyword != "tristate") continue;
                if (!prop.rest.empty() &&
                    !(prop.rest.front() == '"' && prop.rest.back() == '"' && prop.rest.size() >= 2))
                    parse_error(prop.file, prop.line, "expected optional quoted prompt");
                FeatureKind this_kind =
                    prop.keyword == "bool" ? FeatureKind::Bool : FeatureKind::Tristate;
                if (typed && this_kind != kind)
                    parse_error(prop.file, prop.line,
                                "conflicting type for feature '" + block.name + "'");
                kind = this_kind;
                typed = true;
            }
            if (!typed)
                warn("feature '" + block.name + "' has no type line, assuming bool (" +
                     block.file + ":" + std::to_string(block.line) + ")");
            auto it = model_.features.find(block.name);
            if (it == model_.features.end()) {
                model_.features.emplace(block.name, kind);
            } else if (typed && it->second != kind) {
                parse_error(block.file, block.line,
                            "feature '" + block.name + "' redeclared with a different type");
            }
        }
    }

    Formula feature_ref(const std::string& name) {
        return model_.is_tristate(name)
                   ? disj(Formula::var(name), Formula::var(name + "_MODULE"))
                   : Formula::var(name);
    }

    void require_declared(const std::string& name, const std::string& file, int line) {
        if (model_.features.count(name)) return;
        if (!opts_.allow_undeclared)
            throw Error(ErrorCategory::Extraction, "UndeclaredFeature",
                        "reference to undeclared feature '" + name + "'", file, line);
        warn("auto-declaring undeclared feature '" + name + "' as bool (" + file + ":" +
             std::to_string(line) + ")");
        model_.features.emplace(name, FeatureKind::Bool);
    }

    // Maps name references N to (N || N_MODULE) when N is tristate.
    Formula translate_expr(const Formula& f, const std::string& file, int line) {
        switch (f.kind()) {
            case FormulaKind::True:
            case FormulaKind::False:
                return f;
            case FormulaKind::Var:
                require_declared(f.var_name(), file, line);
                return feature_ref(f.var_name());
            case FormulaKind::Not:
                return neg(translate_expr(f.operands().front(), file, line));
            case FormulaKind::And:
            case FormulaKind::Or: {
                std::vector<Formula> ops;
                ops.reserve(f.operands().size());
                for (const auto& op : f.operands()) ops.push_back(translate_expr(op, file, line));
                return f.kind() == FormulaKind::And ? conj_flat(std::move(ops))
                                                    : disj_flat(std::move(ops));
            }
        }
        return f;
    }

    Formula parse_expr(const std::string& text, const std::string& file, int line) {
        try {
            return parse_formula(text);
        } catch (const Error& e) {
            parse_error(file, line, std::string("bad expression: ") + e.what());
        }
    }

    void add_constraint(Formula f, const std::string& file, int line) {
        model_.constraints.push_back(std::move(f));
        model_.source_positions.push_back({file, line});
    }

    void translate_block(const ConfigBlock& block) {
        const std::string& name = block.name;
        bool exclusion_added = false;
        for (const auto& prop : block.props) {
            if (prop.keyword == "bool") continue;
            if (prop.keyword == "tristate") {
                if (exclusion_added) continue;
                exclusion_added = true;
                add_constraint(
                    neg(conj(Formula::var(name), Formula::var(name + "_MODULE"))),
                    prop.file, prop.line);
                continue;
            }
            if (prop.keyword == "depends") {
                if (prop.rest.size() < 3 || prop.rest.rfind("on", 0) != 0 ||
                    !std::isspace(static_cast<unsigned char>(prop.rest[2])))
                    parse_error(prop.file, prop.line, "expected 'depends on <expr>'");
                Formula expr = parse_expr(trim_copy(prop.rest.substr(2)), prop.file, prop.line);
                Formula translated = translate_expr(expr, prop.file, prop.line);
                add_constraint(disj_flat({neg(feature_ref(name)), std::move(translated)}),
                               prop.file, prop.line);
                continue;
            }
            if (prop.keyword == "select") {
                std::string rest = prop.rest;
                std::vector<Formula> antecedent_ops;
                if (auto pos = rest.find(" if "); pos != std::string::npos) {
                    antecedent_ops.push_back(translate_expr(
                        parse_expr(trim_copy(rest.substr(pos + 4)), prop.file, prop.line),
                        prop.file, prop.line));
                    rest = trim_copy(rest.substr(0, pos));
                }
                if (!valid_feature_name(rest))
                    parse_error(prop.file, prop.line, "select expects a feature name");
                require_declared(rest, prop.file, prop.line);
                antecedent_ops.insert(antecedent_ops.begin(), feature_ref(name));
                add_constraint(
                    disj_flat({neg(conj_flat(std::move(antecedent_ops))), feature_ref(rest)}),
                    prop.file, prop.line);
                continue;
            }
            if (prop.keyword == "default") {
                std::string rest = prop.rest;
                if (auto pos = rest.find(" if "); pos != std::string::npos) {
                    // Parsed for validity; defaults contribute no constraint.
                    parse_expr(trim_copy(rest.substr(pos + 4)), prop.file, prop.line);
                    rest = trim_copy(rest.substr(0, pos));
                }
                if (rest != "y" && rest != "n" && rest != "m")
                    parse_error(prop.file, prop.line, "default expects y, n or m");
                continue;
            }
            parse_error(prop.file, prop.line,
                        "unsupported option '" + prop.keyword + "' in config block");
        }
        // Tristate declared without an explicit tristate line cannot happen:
        // the kind comes from the type line collected above.
    }

    const VarModelOptions& opts_;
    std::vector<std::string>* warnings_;
    VariabilityModel model_;
};

}  // namespace

VariabilityModel extract_varmodel(const std::vector<fs::path>& files, const VarModelOptions& opts,
                                  std::vector<std::string>* warnings) {
    std::vector<RawLine> lines;
    std::vector<std::string> source_files;
    for (const auto& file : files) load_file(file, lines, source_files);
    std::vector<ConfigBlock> blocks = group_blocks(lines);
    VariabilityModel model = Translator(opts, warnings).run(blocks);
    std::sort(source_files.begin(), source_files.end());
    source_files.erase(std::unique(source_files.begin(), source_files.end()), source_files.end());
    model.source_files = std::move(source_files);
    return model;
}

std::vector<Assignment> valid_configurations(const VariabilityModel& vm, int bound) {
    std::vector<std::string> vars = vm.variables();
    if (static_cast<int>(vars.size()) > 2 * bound)
        throw Error(ErrorCategory::Analysis, "TooLarge",
                    std::to_string(vars.size()) + " variables exceed the enumeration bound of " +
                        std::to_string(2 * bound));
    std::vector<Assignment> result;
    const size_t n = vars.size();
    for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
        Assignment a;
        for (size_t i = 0; i < n; ++i)
            a[vars[i]] = ((bits >> (n - 1 - i)) & 1) != 0;
        if (eval(vm.constraint, a)) result.push_back(std::move(a));
    }
    return result;
}

}  // namespace varscope
