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

#include <cctype>
#include <string>
#include <vector>

#include "varscope/error.hpp"
#include "varscope/formula.hpp"

namespace varscope {

namespace {

void render_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case FormulaKind::True:
            out += "true";
            return;
        case FormulaKind::False:
            out += "false";
            return;
        case FormulaKind::Var:
            out += f.var_name();
            return;
        case FormulaKind::Not:
            out += '!';
            render_into(f.operands().front(), out);
            return;
        case FormulaKind::And:
        case FormulaKind::Or: {
            const char* op = f.kind() == FormulaKind::And ? " && " : " || ";
            auto ops = f.operands();
            // Left-associative binary rendering: ((a && b) && c).
            std::string acc;
            render_into(ops[0], acc);
            for (size_t i = 1; i < ops.size(); ++i) {
                std::string rhs;
                render_into(ops[i], rhs);
                acc = "(" + acc + op + rhs + ")";
            }
            out += acc;
            return;
        }
    }
}

struct FormulaLexer {
    std::string_view text;
    size_t pos = 0;

    enum class Tok { Ident, True, False, Bang, AndAnd, OrOr, LParen, RParen, End };

    Tok kind = Tok::End;
    std::string ident;

    explicit FormulaLexer(std::string_view t) : text(t) { advance(); }

    [[noreturn]] void fail(const std::string& message) {
        throw Error(ErrorCategory::Extraction, "MalformedFormula",
                    message + " at offset " + std::to_string(pos) + " in \"" + std::string(text) + "\"");
    }

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    void advance() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) {
            kind = Tok::End;
            return;
        }
        char c = text[pos];
        if (c == '!') { kind = Tok::Bang; ++pos; return; }
        if (c == '(') { kind = Tok::LParen; ++pos; return; }
        if (c == ')') { kind = Tok::RParen; ++pos; return; }
        if (c == '&') {
            if (pos + 1 >= text.size() || text[pos + 1] != '&') fail("single '&'");
            kind = Tok::AndAnd;
            pos += 2;
            return;
        }
        if (c == '|') {
            if (pos + 1 >= text.size() || text[pos + 1] != '|') fail("single '|'");
            kind = Tok::OrOr;
            pos += 2;
            return;
        }
        if (ident_char(c)) {
            size_t start = pos;
            while (pos < text.size() && ident_char(text[pos])) ++pos;
            ident = std::string(text.substr(start, pos - start));
            if (ident == "true") kind = Tok::True;
            else if (ident == "false") kind = Tok::False;
            else kind = Tok::Ident;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : lex_(text) {}

    Formula parse() {
        if (lex_.kind == FormulaLexer::Tok::End) lex_.fail("empty formula");
        Formula f = parse_or();
        if (lex_.kind != FormulaLexer::Tok::End) lex_.fail("trailing input");
        return f;
    }

private:
    Formula parse_or() {
        std::vector<Formula> ops{parse_and()};
        while (lex_.kind == FormulaLexer::Tok::OrOr) {
            lex_.advance();
            ops.push_back(parse_and());
        }
        return disj_flat(std::move(ops));
    }

    Formula parse_and() {
        std::vector<Formula> ops{parse_unary()};
        while (lex_.kind == FormulaLexer::Tok::AndAnd) {
            lex_.advance();
            ops.push_back(parse_unary());
        }
        return conj_flat(std::move(ops));
    }

    Formula parse_unary() {
        if (lex_.kind == FormulaLexer::Tok::Bang) {
            lex_.advance();
            return neg(parse_unary());
        }
        return parse_primary();
    }

    Formula parse_primary() {
        switch (lex_.kind) {
            case FormulaLexer::Tok::True:
                lex_.advance();
                return Formula::constant(true);
            case FormulaLexer::Tok::False:
                lex_.advance();
                return Formula::constant(false);
            case FormulaLexer::Tok::Ident: {
                Formula v = Formula::var(lex_.ident);
                lex_.advance();
                return v;
            }
            case FormulaLexer::Tok::LParen: {
                lex_.advance();
                Formula f = parse_or();
                if (lex_.kind != FormulaLexer::Tok::RParen) lex_.fail("expected ')'");
                lex_.advance();
                return f;
            }
            default:
                lex_.fail("expected operand");
        }
    }

    FormulaLexer lex_;
};

}  // namespace

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

Formula parse_formula(std::string_view text) {
    return FormulaParser(text).parse();
}

}  // namespace varscope
