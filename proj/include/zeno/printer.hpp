// Canonical serialization of programs. The printed form is the reference
// encoding: code size limits are measured against it, and parsing it back
// yields the same token sequence.
#pragma once

#include <string>

#include "zeno/ast.hpp"

namespace zeno {

namespace detail {

inline std::string cell_text(const CellRef& cell) {
    switch (cell.kind) {
        case CellKind::Value: return "VALUE";
        case CellKind::ValueNext: return "VALUE_NEXT";
        case CellKind::Named: return cell.name;
    }
    return {};
}

inline std::string expr_text(const Expr& e) {
    std::string out;
    if (e.negated) out += "NOT ";
    if (e.is_literal) {
        out += e.literal ? "1" : "0";
    } else {
        out += cell_text(e.cell);
    }
    return out;
}

inline void print_body(const std::vector<Instruction>& body, int depth, std::string& out) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& instr : body) {
        if (const auto* copy = std::get_if<CopyProgramNext>(&instr.node)) {
            out += indent + "COPY_PROGRAM_NEXT " + copy->target + ";\n";
        } else if (const auto* idle = std::get_if<Idle>(&instr.node)) {
            out += indent + "IDLE " + std::to_string(idle->quanta) + ";\n";
        } else if (const auto* assign = std::get_if<Assign>(&instr.node)) {
            out += indent + cell_text(assign->dest) + " := " + expr_text(assign->expr) + ";\n";
        } else if (const auto* rep = std::get_if<RepeatForever>(&instr.node)) {
            out += indent + "REPEAT\n";
            print_body(rep->body, depth + 1, out);
            out += indent + "UNTIL FALSE;\n";
        }
    }
}

}  // namespace detail

inline std::string pretty_print(const Program& p) {
    std::string out = "PROGRAM " + p.name + ":\n";
    detail::print_body(p.body, 1, out);
    out += "END " + p.name + ";\n";
    return out;
}

}  // namespace zeno
