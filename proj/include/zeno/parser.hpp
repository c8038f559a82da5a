// Recursive-descent parser. Grammar:
//
//   program := "PROGRAM" ident ":" stmt* "END" ident ";"
//   stmt    := "COPY_PROGRAM_NEXT" ident ";"
//            | "IDLE" int ";"
//            | cell ":=" expr ";"
//            | "REPEAT" stmt* "UNTIL" "FALSE" ";"
//   expr    := ["NOT"] (cell | "0" | "1")
//   cell    := "VALUE" | "VALUE_NEXT" | ident
//
// The PROGRAM/END names must match. Integer literals in expressions are
// restricted to 0 and 1; NOT applies at most once.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/ast.hpp"
#include "zeno/lexer.hpp"

namespace zeno {

struct ParseError : std::runtime_error {
    ParseError(SourcePos p, const std::string& expected_what)
        : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                             std::to_string(p.column) + ": expected " + expected_what),
          pos(p),
          expected(expected_what) {}
    SourcePos pos;
    std::string expected;
};

struct NameMismatchError : ParseError {
    NameMismatchError(SourcePos p, const std::string& program, const std::string& end)
        : ParseError(p, "END name '" + program + "' (got '" + end + "')") {}
};

namespace detail {

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    Program parse_program() {
        expect_keyword("PROGRAM");
        Program p;
        p.name = expect(TokenKind::Identifier, "program name").text;
        expect(TokenKind::Colon, "':'");
        p.body = parse_statements();
        expect_keyword("END");
        Token end_name = expect(TokenKind::Identifier, "program name after END");
        if (end_name.text != p.name) throw NameMismatchError(end_name.pos, p.name, end_name.text);
        expect(TokenKind::Semicolon, "';'");
        if (pos_ != toks_.size()) {
            throw ParseError(toks_[pos_].pos, "end of input after END");
        }
        return p;
    }

private:
    std::vector<Instruction> parse_statements() {
        std::vector<Instruction> body;
        while (true) {
            const Token* t = peek();
            if (!t) throw ParseError(eof_pos(), "statement or END");
            if (t->kind == TokenKind::Keyword && (t->text == "END" || t->text == "UNTIL")) {
                return body;
            }
            body.push_back(parse_statement());
        }
    }

    Instruction parse_statement() {
        const Token& t = *peek();
        if (t.kind == TokenKind::Keyword && t.text == "COPY_PROGRAM_NEXT") {
            ++pos_;
            CopyProgramNext copy;
            copy.target = expect(TokenKind::Identifier, "program name").text;
            expect(TokenKind::Semicolon, "';'");
            return {copy, t.pos};
        }
        if (t.kind == TokenKind::Keyword && t.text == "IDLE") {
            ++pos_;
            Token count = expect(TokenKind::IntegerLiteral, "idle count");
            expect(TokenKind::Semicolon, "';'");
            Idle idle;
            try {
                idle.quanta = std::stoull(count.text);
            } catch (const std::out_of_range&) {
                throw ParseError(count.pos, "idle count within range");
            }
            return {idle, t.pos};
        }
        if (t.kind == TokenKind::Keyword && t.text == "REPEAT") {
            ++pos_;
            RepeatForever rep;
            rep.body = parse_statements();
            expect_keyword("UNTIL");
            expect_keyword("FALSE");
            expect(TokenKind::Semicolon, "';'");
            return {rep, t.pos};
        }
        if (is_cell_start(t)) {
            Assign assign;
            assign.dest = parse_cell();
            expect(TokenKind::AssignSymbol, "':='");
            assign.expr = parse_expr();
            expect(TokenKind::Semicolon, "';'");
            return {assign, t.pos};
        }
        throw ParseError(t.pos, "statement");
    }

    Expr parse_expr() {
        Expr e;
        const Token* t = peek();
        if (!t) throw ParseError(eof_pos(), "expression");
        if (t->kind == TokenKind::Keyword && t->text == "NOT") {
            e.negated = true;
            ++pos_;
            t = peek();
            if (!t) throw ParseError(eof_pos(), "operand after NOT");
        }
        if (t->kind == TokenKind::IntegerLiteral) {
            if (t->text != "0" && t->text != "1") {
                throw ParseError(t->pos, "literal 0 or 1");
            }
            e.is_literal = true;
            e.literal = static_cast<std::uint8_t>(t->text == "1" ? 1 : 0);
            ++pos_;
            return e;
        }
        if (is_cell_start(*t)) {
            e.cell = parse_cell();
            return e;
        }
        throw ParseError(t->pos, "cell or literal 0/1");
    }

    static bool is_cell_start(const Token& t) {
        if (t.kind == TokenKind::Identifier) return true;
        return t.kind == TokenKind::Keyword && (t.text == "VALUE" || t.text == "VALUE_NEXT");
    }

    CellRef parse_cell() {
        const Token& t = *peek();
        ++pos_;
        if (t.kind == TokenKind::Keyword && t.text == "VALUE") return {CellKind::Value, {}};
        if (t.kind == TokenKind::Keyword && t.text == "VALUE_NEXT") return {CellKind::ValueNext, {}};
        return {CellKind::Named, t.text};
    }

    const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

    Token expect(TokenKind kind, const std::string& what) {
        const Token* t = peek();
        if (!t || t->kind != kind) throw ParseError(t ? t->pos : eof_pos(), what);
        ++pos_;
        return *t;
    }

    void expect_keyword(const std::string& kw) {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::Keyword || t->text != kw) {
            throw ParseError(t ? t->pos : eof_pos(), "'" + kw + "'");
        }
        ++pos_;
    }

    SourcePos eof_pos() const {
        return toks_.empty() ? SourcePos{} : toks_.back().pos;
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Program parse(const std::vector<Token>& tokens) {
    return detail::Parser(tokens).parse_program();
}

inline Program parse_source(std::string_view source) { return parse(tokenize(source)); }

}  // namespace zeno
