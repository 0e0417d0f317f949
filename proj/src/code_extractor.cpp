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

#include "varscope/code_extractor.hpp"

#include <cctype>
#include <optional>

#include "varscope/error.hpp"
#include "varscope/hashing.hpp"

namespace varscope {

namespace {

[[noreturn]] void malformed(const std::string& file, int line, const std::string& message) {
    throw Error(ErrorCategory::Extraction, "MalformedExpression", message, file, line);
}

[[noreturn]] void unbalanced(const std::string& file, int line, const std::string& message) {
    throw Error(ErrorCategory::Extraction, "UnbalancedDirectives", message, file, line);
}

// Replaces comments with spaces and blanks out string/char literal contents
// (quotes kept), preserving the line structure. Directive scanning runs on
// the cleaned text, so directives inside comments or literals are invisible,
// which matches how the preprocessor itself sees them.
std::string clean_source(std::string_view src) {
    enum class State { Normal, LineComment, BlockComment, String, Char };
    std::string out(src);
    State state = State::Normal;
    for (size_t i = 0; i < src.size(); ++i) {
        char c = src[i];
        char next = i + 1 < src.size() ? src[i + 1] : '\0';
        switch (state) {
            case State::Normal:
                if (c == '/' && next == '/') {
                    state = State::LineComment;
                    out[i] = out[i + 1] = ' ';
                    ++i;
                } else if (c == '/' && next == '*') {
                    state = State::BlockComment;
                    out[i] = out[i + 1] = ' ';
                    ++i;
                } else if (c == '"') {
                    state = State::String;
                } else if (c == '\'') {
                    state = State::Char;
                }
                break;
            case State::LineComment:
                if (c == '\\' && (next == '\n' || (next == '\r' && i + 2 < src.size() && src[i + 2] == '\n'))) {
                    out[i] = ' ';  // comment continues past the spliced newline
                } else if (c == '\n') {
                    state = State::Normal;
                } else {
                    out[i] = ' ';
                }
                break;
            case State::BlockComment:
                if (c == '*' && next == '/') {
                    out[i] = out[i + 1] = ' ';
                    ++i;
                    state = State::Normal;
                } else if (c != '\n') {
                    out[i] = ' ';
                }
                break;
            case State::String:
            case State::Char: {
                char quote = state == State::String ? '"' : '\'';
                if (c == '\\') {
                    out[i] = ' ';
                    if (i + 1 < src.size() && src[i + 1] != '\n') {
                        out[i + 1] = ' ';
                        ++i;
                    }
                } else if (c == quote) {
                    state = State::Normal;
                } else if (c != '\n') {
                    out[i] = ' ';
                }
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string line(text.substr(start, i - start));
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = i + 1;
        }
    }
    if (lines.size() > 1 && lines.back().empty()) lines.pop_back();  // trailing newline
    return lines;
}

// ---- condition expression parsing ----------------------------------------

struct CondToken {
    enum class Kind { Ident, Defined, Bang, AndAnd, OrOr, LParen, RParen, Other, End };
    Kind kind = Kind::End;
    std::string text;
    size_t begin = 0;
    size_t end = 0;
};

std::vector<CondToken> lex_condition(std::string_view text) {
    std::vector<CondToken> toks;
    size_t i = 0;
    auto push = [&](CondToken::Kind kind, size_t begin, size_t end) {
        toks.push_back({kind, std::string(text.substr(begin, end - begin)), begin, end});
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (c == '(') { push(CondToken::Kind::LParen, i, i + 1); ++i; continue; }
        if (c == ')') { push(CondToken::Kind::RParen, i, i + 1); ++i; continue; }
        if (c == '!' && (i + 1 >= text.size() || text[i + 1] != '=')) {
            push(CondToken::Kind::Bang, i, i + 1);
            ++i;
            continue;
        }
        if (c == '&' && i + 1 < text.size() && text[i + 1] == '&') {
            push(CondToken::Kind::AndAnd, i, i + 2);
            i += 2;
            continue;
        }
        if (c == '|' && i + 1 < text.size() && text[i + 1] == '|') {
            push(CondToken::Kind::OrOr, i, i + 2);
            i += 2;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            auto kind = text.substr(start, i - start) == "defined" ? CondToken::Kind::Defined
                                                                   : CondToken::Kind::Ident;
            push(kind, start, i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '.'))
                ++i;
            push(CondToken::Kind::Other, start, i);
            continue;
        }
        push(CondToken::Kind::Other, i, i + 1);
        ++i;
    }
    toks.push_back({CondToken::Kind::End, "", text.size(), text.size()});
    return toks;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Raised when a token run turns out not to be grammar-conformant; the
// enclosing operand collapses into an opaque atom.
struct NotInGrammar {};

class ConditionParser {
public:
    ConditionParser(std::string_view text, const ExtractOptions& opts,
                    std::set<std::string>& unknown_atoms, const std::string& file, int line)
        : text_(text),
          toks_(lex_condition(text)),
          opts_(opts),
          unknown_atoms_(unknown_atoms),
          file_(file),
          line_(line) {}

    Formula parse() {
        if (peek().kind == CondToken::Kind::End)
            malformed(file_, line_, "empty directive expression");
        Formula f = parse_range(0, toks_.size() - 1);
        return f;
    }

private:
    const CondToken& tok(size_t i) const { return toks_[std::min(i, toks_.size() - 1)]; }
    const CondToken& peek() const { return toks_[pos_]; }

    // Parses tokens [begin, end) as one full expression.
    Formula parse_range(size_t begin, size_t end) {
        size_t saved = pos_, saved_end = end_;
        pos_ = begin;
        end_ = end;
        Formula f = parse_or();
        if (pos_ != end_) {
            if (peek().kind == CondToken::Kind::RParen)
                malformed(file_, line_, "unbalanced ')' in \"" + std::string(text_) + "\"");
            malformed(file_, line_, "unexpected trailing tokens in \"" + std::string(text_) + "\"");
        }
        pos_ = saved;
        end_ = saved_end;
        return f;
    }

    bool at_end() const { return pos_ >= end_ || peek().kind == CondToken::Kind::End; }

    bool at_boundary() const {
        if (at_end()) return true;
        auto k = peek().kind;
        return k == CondToken::Kind::AndAnd || k == CondToken::Kind::OrOr ||
               k == CondToken::Kind::RParen;
    }

    Formula parse_or() {
        std::vector<Formula> ops{parse_and()};
        while (!at_end() && peek().kind == CondToken::Kind::OrOr) {
            ++pos_;
            ops.push_back(parse_and());
        }
        return disj_flat(std::move(ops));
    }

    Formula parse_and() {
        std::vector<Formula> ops{parse_operand()};
        while (!at_end() && peek().kind == CondToken::Kind::AndAnd) {
            ++pos_;
            ops.push_back(parse_operand());
        }
        return conj_flat(std::move(ops));
    }

    // One operand of a &&/|| chain. If the tokens do not fit the grammar, the
    // maximal run up to the next same-depth boundary becomes an opaque atom.
    Formula parse_operand() {
        size_t start = pos_;
        try {
            Formula f = parse_unary();
            if (at_boundary()) return f;
        } catch (const NotInGrammar&) {
        }
        pos_ = start;
        return consume_opaque();
    }

    Formula parse_unary() {
        if (at_end()) malformed(file_, line_, "missing operand in \"" + std::string(text_) + "\"");
        if (peek().kind == CondToken::Kind::Bang) {
            ++pos_;
            return neg(parse_unary());
        }
        return parse_primary();
    }

    Formula parse_primary() {
        switch (peek().kind) {
            case CondToken::Kind::LParen: {
                size_t close = matching_paren(pos_);
                Formula inner = parse_range(pos_ + 1, close);
                pos_ = close + 1;
                return inner;
            }
            case CondToken::Kind::Defined: {
                ++pos_;
                if (!at_end() && peek().kind == CondToken::Kind::LParen) {
                    size_t close = matching_paren(pos_);
                    if (close != pos_ + 2 || tok(pos_ + 1).kind != CondToken::Kind::Ident)
                        throw NotInGrammar{};
                    Formula v = make_variable(tok(pos_ + 1).text);
                    pos_ = close + 1;
                    return v;
                }
                if (!at_end() && peek().kind == CondToken::Kind::Ident) {
                    Formula v = make_variable(peek().text);
                    ++pos_;
                    return v;
                }
                throw NotInGrammar{};
            }
            case CondToken::Kind::Ident: {
                if (tok(pos_ + 1).kind == CondToken::Kind::LParen)
                    throw NotInGrammar{};  // function-like macro
                Formula v = make_variable(peek().text);
                ++pos_;
                return v;
            }
            case CondToken::Kind::RParen:
                malformed(file_, line_, "unbalanced ')' in \"" + std::string(text_) + "\"");
            case CondToken::Kind::AndAnd:
            case CondToken::Kind::OrOr:
                malformed(file_, line_, "missing operand in \"" + std::string(text_) + "\"");
            default:
                throw NotInGrammar{};
        }
    }

    // Throws NotInGrammar for reserved names so the operand goes opaque.
    Formula make_variable(const std::string& raw) {
        std::string name = raw;
        const std::string& prefix = opts_.variability_prefix;
        if (!prefix.empty() && name.size() > prefix.size() && name.rfind(prefix, 0) == 0)
            name = name.substr(prefix.size());
        if (name.empty() || name.rfind("__", 0) == 0) throw NotInGrammar{};
        return Formula::var(name);
    }

    size_t matching_paren(size_t open) const {
        int depth = 0;
        for (size_t i = open; i < end_; ++i) {
            if (tok(i).kind == CondToken::Kind::LParen) ++depth;
            else if (tok(i).kind == CondToken::Kind::RParen && --depth == 0) return i;
        }
        malformed(file_, line_, "unbalanced '(' in \"" + std::string(text_) + "\"");
    }

    Formula consume_opaque() {
        size_t start = pos_;
        int depth = 0;
        while (!at_end()) {
            auto k = peek().kind;
            if (depth == 0 &&
                (k == CondToken::Kind::AndAnd || k == CondToken::Kind::OrOr ||
                 k == CondToken::Kind::RParen))
                break;
            if (k == CondToken::Kind::LParen) ++depth;
            if (k == CondToken::Kind::RParen) --depth;
            ++pos_;
        }
        if (depth != 0) malformed(file_, line_, "unbalanced '(' in \"" + std::string(text_) + "\"");
        std::string_view span = trim(text_.substr(tok(start).begin, tok(pos_ - 1).end - tok(start).begin));
        std::string name = "U_" + fnv1a64_hex(span);
        unknown_atoms_.insert(name);
        return Formula::var(std::move(name));
    }

    std::string_view text_;
    std::vector<CondToken> toks_;
    const ExtractOptions& opts_;
    std::set<std::string>& unknown_atoms_;
    std::string file_;
    int line_;
    size_t pos_ = 0;
    size_t end_ = toks_.size();
};

// ---- directive scanning ----------------------------------------------------

struct Directive {
    enum class Kind { If, Ifdef, Ifndef, Elif, Else, Endif };
    Kind kind;
    int line = 0;       // first physical line
    int last_line = 0;  // last physical line (continuations)
    std::string expr;   // raw expression text for If/Ifdef/Ifndef/Elif
};

std::optional<Directive> scan_directive(const std::vector<std::string>& lines, size_t& index,
                                        const std::string& file) {
    const std::string& first = lines[index];
    size_t p = 0;
    while (p < first.size() && std::isspace(static_cast<unsigned char>(first[p]))) ++p;
    if (p >= first.size() || first[p] != '#') return std::nullopt;

    // Join backslash continuations into one logical line.
    std::string logical = first;
    size_t last = index;
    while (!logical.empty() && logical.back() == '\\' && last + 1 < lines.size()) {
        logical.pop_back();
        ++last;
        logical += lines[last];
    }

    size_t q = logical.find('#') + 1;
    while (q < logical.size() && std::isspace(static_cast<unsigned char>(logical[q]))) ++q;
    size_t name_start = q;
    while (q < logical.size() &&
           (std::isalnum(static_cast<unsigned char>(logical[q])) || logical[q] == '_'))
        ++q;
    std::string name = logical.substr(name_start, q - name_start);

    Directive d;
    d.line = static_cast<int>(index + 1);
    d.last_line = static_cast<int>(last + 1);
    d.expr = std::string(trim(std::string_view(logical).substr(q)));

    if (name == "if") d.kind = Directive::Kind::If;
    else if (name == "ifdef") d.kind = Directive::Kind::Ifdef;
    else if (name == "ifndef") d.kind = Directive::Kind::Ifndef;
    else if (name == "elif") d.kind = Directive::Kind::Elif;
    else if (name == "else") d.kind = Directive::Kind::Else;
    else if (name == "endif") d.kind = Directive::Kind::Endif;
    else {
        index = last;  // some other directive (#include, #define, ...)
        return std::nullopt;
    }

    if (d.kind == Directive::Kind::Ifdef || d.kind == Directive::Kind::Ifndef) {
        std::string_view ident = trim(d.expr);
        bool valid = !ident.empty();
        for (char c : ident)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') valid = false;
        if (!valid)
            malformed(file, d.line, "#" + name + " expects a single identifier, got \"" + d.expr + "\"");
        d.expr = std::string(ident);
    }

    index = last;
    return d;
}

struct ChainFrame {
    std::vector<Formula> raw_conditions;  // raw c_i of the chain so far
    bool saw_else = false;
    CodeBlock open;  // branch currently being built
};

}  // namespace

Formula parse_cpp_condition(std::string_view text, const ExtractOptions& opts,
                            std::set<std::string>& unknown_atoms, const std::string& file,
                            int line) {
    return ConditionParser(text, opts, unknown_atoms, file, line).parse();
}

CodeModel extract_file(std::string_view source, const std::string& file,
                       const ExtractOptions& opts) {
    CodeModel model;
    model.file = file;

    const std::string cleaned = clean_source(source);
    const std::vector<std::string> lines = split_lines(cleaned);

    model.root.file = file;
    model.root.line_start = 1;
    model.root.line_end = static_cast<int>(std::max<size_t>(lines.size(), 1));

    std::vector<ChainFrame> stack;

    auto parent_pc = [&]() -> const Formula& {
        return stack.size() >= 2 ? stack[stack.size() - 2].open.presence_condition
                                 : model.root.presence_condition;
    };
    auto parent_children = [&]() -> std::vector<CodeBlock>& {
        return stack.size() >= 2 ? stack[stack.size() - 2].open.children : model.root.children;
    };

    auto open_branch = [&](ChainFrame& frame, BranchKind kind, int line, Formula condition) {
        frame.open = CodeBlock{};
        frame.open.branch_kind = kind;
        frame.open.file = file;
        frame.open.line_start = line;
        frame.open.condition = std::move(condition);
    };

    for (size_t i = 0; i < lines.size(); ++i) {
        auto directive = scan_directive(lines, i, file);
        if (!directive) continue;

        switch (directive->kind) {
            case Directive::Kind::If:
            case Directive::Kind::Ifdef:
            case Directive::Kind::Ifndef: {
                Formula cond;
                BranchKind kind;
                if (directive->kind == Directive::Kind::If) {
                    cond = parse_cpp_condition(directive->expr, opts, model.unknown_atoms, file,
                                               directive->line);
                    kind = BranchKind::If;
                } else {
                    std::set<std::string> atoms;
                    Formula var = parse_cpp_condition("defined(" + directive->expr + ")", opts,
                                                      atoms, file, directive->line);
                    model.unknown_atoms.insert(atoms.begin(), atoms.end());
                    if (directive->kind == Directive::Kind::Ifdef) {
                        cond = var;
                        kind = BranchKind::Ifdef;
                    } else {
                        cond = neg(var);
                        kind = BranchKind::Ifndef;
                    }
                }
                ChainFrame frame;
                frame.raw_conditions.push_back(cond);
                open_branch(frame, kind, directive->line, cond);
                stack.push_back(std::move(frame));
                stack.back().open.presence_condition =
                    simplify(conj(parent_pc(), stack.back().open.condition));
                break;
            }
            case Directive::Kind::Elif: {
                if (stack.empty())
                    unbalanced(file, directive->line, "#elif without open #if");
                ChainFrame& frame = stack.back();
                if (frame.saw_else)
                    unbalanced(file, directive->line, "#elif after #else");
                frame.open.line_end = directive->line - 1;
                Formula raw = parse_cpp_condition(directive->expr, opts, model.unknown_atoms,
                                                  file, directive->line);
                // c_i && !c_1 && ... && !c_{i-1} over the chain's raw conditions.
                std::vector<Formula> ops{raw};
                for (const auto& prior : frame.raw_conditions) ops.push_back(neg(prior));
                Formula cond = conj_flat(std::move(ops));
                CodeBlock finished = std::move(frame.open);
                frame.raw_conditions.push_back(std::move(raw));
                open_branch(frame, BranchKind::Elif, directive->line, std::move(cond));
                // Append after open_branch so parent_children sees a stable stack.
                parent_children().push_back(std::move(finished));
                frame.open.presence_condition = simplify(conj(parent_pc(), frame.open.condition));
                break;
            }
            case Directive::Kind::Else: {
                if (stack.empty())
                    unbalanced(file, directive->line, "#else without open #if");
                ChainFrame& frame = stack.back();
                if (frame.saw_else)
                    unbalanced(file, directive->line, "duplicate #else");
                frame.open.line_end = directive->line - 1;
                std::vector<Formula> priors = frame.raw_conditions;
                Formula cond = neg(disj_flat(std::move(priors)));
                CodeBlock finished = std::move(frame.open);
                frame.saw_else = true;
                open_branch(frame, BranchKind::Else, directive->line, std::move(cond));
                parent_children().push_back(std::move(finished));
                frame.open.presence_condition = simplify(conj(parent_pc(), frame.open.condition));
                break;
            }
            case Directive::Kind::Endif: {
                if (stack.empty())
                    unbalanced(file, directive->line, "#endif without open #if");
                ChainFrame frame = std::move(stack.back());
                stack.pop_back();
                frame.open.line_end = directive->line - 1;
                (stack.empty() ? model.root.children : stack.back().open.children)
                    .push_back(std::move(frame.open));
                break;
            }
        }
    }

    if (!stack.empty())
        unbalanced(file, stack.back().open.line_start,
                   "end of file inside an open conditional block");
    return model;
}

namespace {

void walk_blocks(const CodeBlock& block, std::vector<PresenceEntry>& out) {
    out.push_back({block.file, block.line_start, block.presence_condition});
    for (const auto& child : block.children) walk_blocks(child, out);
}

}  // namespace

std::vector<PresenceEntry> presence_conditions(const CodeModel& m) {
    std::vector<PresenceEntry> out;
    for (const auto& child : m.root.children) walk_blocks(child, out);
    return out;
}

const char* branch_kind_name(BranchKind kind) {
    switch (kind) {
        case BranchKind::If: return "If";
        case BranchKind::Elif: return "Elif";
        case BranchKind::Else: return "Else";
        case BranchKind::Ifdef: return "Ifdef";
        case BranchKind::Ifndef: return "Ifndef";
    }
    return "If";
}

}  // namespace varscope
