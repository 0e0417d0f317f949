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

#include "varscope/build_extractor.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "varscope/error.hpp"

namespace fs = std::filesystem;

namespace varscope {

namespace {

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string normalize_path(const fs::path& p) {
    return p.lexically_normal().generic_string();
}

class BuildParser {
public:
    BuildParser(const fs::path& root, const BuildOptions& opts) : root_(root), opts_(opts) {}

    BuildModel run() {
        parse_directory("", Formula::constant(true), true);
        for (auto& [file, pc] : model_.entries) pc = simplify(pc);
        std::sort(model_.source_files.begin(), model_.source_files.end());
        model_.source_files.erase(
            std::unique(model_.source_files.begin(), model_.source_files.end()),
            model_.source_files.end());
        std::sort(model_.unresolved.begin(), model_.unresolved.end(),
                  [](const UnresolvedLine& a, const UnresolvedLine& b) {
                      return std::tie(a.file, a.line) < std::tie(b.file, b.line);
                  });
        return std::move(model_);
    }

private:
    // X or (X || X_MODULE), per the tristate option.
    Formula config_ref(const std::string& feature) const {
        if (!opts_.tristate) return Formula::var(feature);
        return disj(Formula::var(feature), Formula::var(feature + "_MODULE"));
    }

    // Strips the configurable prefix; the Kbuild grammar spells it out as
    // $(CONFIG_X) so a non-matching name is left untouched.
    std::string strip_prefix(const std::string& name) const {
        const std::string& prefix = opts_.variability_prefix;
        if (!prefix.empty() && name.size() > prefix.size() && name.rfind(prefix, 0) == 0)
            return name.substr(prefix.size());
        return name;
    }

    void parse_directory(const std::string& rel_dir, const Formula& dir_condition, bool top_level) {
        fs::path dir = rel_dir.empty() ? root_ : root_ / rel_dir;
        fs::path makefile;
        for (const char* candidate : {"Kbuild", "Makefile"}) {
            if (fs::exists(dir / candidate)) {
                makefile = dir / candidate;
                break;
            }
        }
        if (makefile.empty()) {
            if (top_level)
                throw Error(ErrorCategory::Extraction, "MissingMakefile",
                            "no Makefile or Kbuild under " + dir.string());
            throw Error(ErrorCategory::Extraction, "MissingMakefile",
                        "referenced directory '" + rel_dir + "' has no Makefile or Kbuild");
        }

        std::ifstream in(makefile);
        if (!in)
            throw Error(ErrorCategory::Io, "FileRead", "cannot open " + makefile.string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        parse_makefile(content, rel_dir,
                       normalize_path(rel_dir.empty() ? makefile.filename()
                                                      : fs::path(rel_dir) / makefile.filename()),
                       dir_condition);
    }

    void parse_makefile(const std::string& content, const std::string& rel_dir,
                        const std::string& display_path, const Formula& dir_condition) {
        model_.source_files.push_back(display_path);
        std::vector<Formula> cond_stack;  // open ifeq/ifneq/ifdef conditions
        std::istringstream stream(content);
        std::string raw;
        int line_no = 0;
        while (std::getline(stream, raw)) {
            ++line_no;
            int first_line = line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            while (!raw.empty() && raw.back() == '\\') {
                raw.pop_back();
                std::string next;
                if (!std::getline(stream, next)) break;
                ++line_no;
                if (!next.empty() && next.back() == '\r') next.pop_back();
                raw += ' ';
                raw += next;
            }
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            std::string line = trim_copy(raw);
            if (line.empty()) continue;

            if (handle_conditional(line, display_path, first_line, cond_stack)) continue;
            if (handle_obj_line(line, rel_dir, display_path, first_line, dir_condition, cond_stack))
                continue;
            model_.unresolved.push_back({display_path, first_line, line});
        }
        if (!cond_stack.empty())
            throw Error(ErrorCategory::Extraction, "UnbalancedConditional",
                        "end of file with open conditional", display_path, line_no);
    }

    bool handle_conditional(const std::string& line, const std::string& file, int line_no,
                            std::vector<Formula>& cond_stack) {
        auto starts_with = [&](const char* kw) {
            size_t n = std::strlen(kw);
            return line.size() >= n && line.compare(0, n, kw) == 0 &&
                   (line.size() == n || !std::isalnum(static_cast<unsigned char>(line[n])));
        };

        if (starts_with("ifeq") || starts_with("ifneq")) {
            bool negate = starts_with("ifneq");
            // ifeq ($(CONFIG_X),y)
            static const std::string open = "($(";
            auto lp = line.find(open);
            auto comma = line.find(',');
            auto rp = line.rfind(')');
            if (lp == std::string::npos || comma == std::string::npos || rp == std::string::npos ||
                comma < lp || rp < comma) {
                cond_stack.push_back(Formula::constant(true));
                model_.unresolved.push_back({file, line_no, line});
                return true;
            }
            std::string var = trim_copy(line.substr(lp + open.size(),
                                                    line.find(')', lp) - lp - open.size()));
            std::string value = trim_copy(line.substr(comma + 1, rp - comma - 1));
            if (var.empty() || value != "y") {
                cond_stack.push_back(Formula::constant(true));
                model_.unresolved.push_back({file, line_no, line});
                return true;
            }
            Formula cond = Formula::var(strip_prefix(var));  // =y compares the boolean half
            cond_stack.push_back(negate ? neg(cond) : cond);
            return true;
        }
        if (starts_with("ifdef")) {
            std::string var = trim_copy(line.substr(5));
            if (var.empty()) {
                cond_stack.push_back(Formula::constant(true));
                model_.unresolved.push_back({file, line_no, line});
                return true;
            }
            cond_stack.push_back(config_ref(strip_prefix(var)));
            return true;
        }
        if (starts_with("ifndef")) {
            std::string var = trim_copy(line.substr(6));
            if (var.empty()) {
                cond_stack.push_back(Formula::constant(true));
                model_.unresolved.push_back({file, line_no, line});
                return true;
            }
            cond_stack.push_back(neg(config_ref(strip_prefix(var))));
            return true;
        }
        if (starts_with("else")) {
            if (cond_stack.empty())
                throw Error(ErrorCategory::Extraction, "UnbalancedConditional",
                            "'else' without open conditional", file, line_no);
            cond_stack.back() = neg(cond_stack.back());
            return true;
        }
        if (starts_with("endif")) {
            if (cond_stack.empty())
                throw Error(ErrorCategory::Extraction, "UnbalancedConditional",
                            "'endif' without open conditional", file, line_no);
            cond_stack.pop_back();
            return true;
        }
        return false;
    }

    bool handle_obj_line(const std::string& line, const std::string& rel_dir,
                         const std::string& file, int line_no, const Formula& dir_condition,
                         const std::vector<Formula>& cond_stack) {
        if (line.rfind("obj-", 0) != 0) return false;
        auto plus = line.find("+=");
        if (plus == std::string::npos) return false;  // e.g. obj-y := ... stays unresolved
        std::string selector = trim_copy(line.substr(4, plus - 4));
        std::string items = trim_copy(line.substr(plus + 2));

        Formula list_condition;
        if (selector == "y" || selector == "m") {
            list_condition = Formula::constant(true);
        } else if (selector.rfind("$(", 0) == 0 && selector.back() == ')') {
            std::string var = trim_copy(selector.substr(2, selector.size() - 3));
            if (var.empty()) return false;
            list_condition = config_ref(strip_prefix(var));
        } else {
            return false;
        }

        std::vector<Formula> conjuncts{dir_condition};
        conjuncts.insert(conjuncts.end(), cond_stack.begin(), cond_stack.end());
        conjuncts.push_back(list_condition);
        Formula condition = simplify(conj_flat(std::move(conjuncts)));

        std::istringstream item_stream(items);
        std::string item;
        while (item_stream >> item) {
            if (item.size() > 1 && item.back() == '/') {
                std::string sub = normalize_path(fs::path(rel_dir) / item.substr(0, item.size() - 1));
                parse_directory(sub, condition, false);
            } else if (item.size() > 2 && item.ends_with(".o")) {
                std::string src = item.substr(0, item.size() - 2) + ".c";
                std::string path = normalize_path(fs::path(rel_dir) / src);
                auto it = model_.entries.find(path);
                if (it == model_.entries.end())
                    model_.entries.emplace(path, condition);
                else
                    it->second = disj_flat({it->second, condition});  // merged by disjunction
            } else {
                model_.unresolved.push_back({file, line_no, item});
            }
        }
        return true;
    }

    fs::path root_;
    const BuildOptions& opts_;
    BuildModel model_;
};

}  // namespace

BuildModel extract_build(const fs::path& root, const BuildOptions& opts) {
    return BuildParser(root, opts).run();
}

Formula lookup_pc(const BuildModel& m, const std::string& file, const BuildOptions& opts,
                  std::vector<std::string>* diagnostics) {
    auto it = m.entries.find(file);
    if (it != m.entries.end()) return it->second;
    if (diagnostics)
        diagnostics->push_back("no build entry for '" + file + "', assuming " +
                               (opts.missing_file_pc ? "true" : "false"));
    return Formula::constant(opts.missing_file_pc);
}

}  // namespace varscope
