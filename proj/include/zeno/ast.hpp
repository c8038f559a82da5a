// Token and AST definitions for the cascade toy language, plus the
// instruction cost model shared by the interpreters.
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace zeno {

struct SourcePos {
    int line = 1;
    int column = 1;
};

enum class TokenKind { Keyword, Identifier, IntegerLiteral, AssignSymbol, Semicolon, Colon };

// Keywords are matched case-insensitively and canonicalized to upper case in
// `text`; identifier text is kept verbatim (identifiers are case-sensitive).
struct Token {
    TokenKind kind;
    std::string text;
    SourcePos pos;
};

enum class CellKind {
    Value,      // the machine's own data byte
    ValueNext,  // the adjacent machine's data byte
    Named,      // a user-named byte variable (aliases the machine's one byte)
};

struct CellRef {
    CellKind kind = CellKind::Value;
    std::string name;  // set for Named

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

// expr := ["NOT"] (cell | "0" | "1") -- NOT applies at most once.
struct Expr {
    bool negated = false;
    bool is_literal = false;
    std::uint8_t literal = 0;
    CellRef cell;
};

struct Instruction;

struct CopyProgramNext {
    std::string target;
};

struct Idle {
    std::uint64_t quanta = 0;
};

struct Assign {
    CellRef dest;
    Expr expr;
};

struct RepeatForever {
    std::vector<Instruction> body;
};

struct Instruction {
    std::variant<CopyProgramNext, Idle, Assign, RepeatForever> node;
    SourcePos pos;
};

struct Program {
    std::string name;
    std::vector<Instruction> body;
};

inline bool expr_reads_cell(const Expr& e) { return !e.is_literal; }

// Every instruction costs one local quantum, except IDLE m (m quanta) and an
// assignment that routes a cell read through NOT (two quanta: evaluate, then
// store). Loop headers carry no cost of their own.
inline std::uint64_t cost_quanta(const Instruction& instr) {
    if (const auto* idle = std::get_if<Idle>(&instr.node)) return idle->quanta;
    if (const auto* assign = std::get_if<Assign>(&instr.node)) {
        return (assign->expr.negated && expr_reads_cell(assign->expr)) ? 2 : 1;
    }
    return 1;
}

inline bool contains_repeat(const std::vector<Instruction>& body) {
    for (const auto& instr : body) {
        if (const auto* rep = std::get_if<RepeatForever>(&instr.node)) {
            (void)rep;
            return true;
        }
    }
    return false;
}

inline bool contains_copy(const std::vector<Instruction>& body) {
    for (const auto& instr : body) {
        if (std::holds_alternative<CopyProgramNext>(instr.node)) return true;
        if (const auto* rep = std::get_if<RepeatForever>(&instr.node)) {
            if (contains_copy(rep->body)) return true;
        }
    }
    return false;
}

inline bool is_loop_dialect(const Program& p) { return contains_repeat(p.body); }
inline bool is_cascade_dialect(const Program& p) { return !contains_repeat(p.body); }

}  // namespace zeno
