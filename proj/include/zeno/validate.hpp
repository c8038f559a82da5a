// Static checks against the machine model: 1 Kbyte of program code, one data
// byte per machine, and dialect exclusivity (a program either spawns copies
// of itself down the chain or loops forever on one machine, never both).
#pragma once

#include <set>
#include <string>
#include <vector>

#include "zeno/ast.hpp"
#include "zeno/printer.hpp"

namespace zeno {

inline constexpr std::size_t kCodeLimitBytes = 1024;

struct Diagnostic {
    SourcePos pos;
    std::string message;
};

struct ValidationReport {
    bool ok = false;
    std::size_t code_size = 0;
    int data_cells_used = 0;
    std::vector<Diagnostic> diagnostics;
};

namespace detail {

struct CellUsage {
    bool uses_value = false;
    bool uses_value_next = false;
    std::set<std::string> named;
};

inline void collect_cell(const CellRef& cell, CellUsage& usage) {
    switch (cell.kind) {
        case CellKind::Value: usage.uses_value = true; break;
        case CellKind::ValueNext: usage.uses_value_next = true; break;
        case CellKind::Named: usage.named.insert(cell.name); break;
    }
}

inline void collect_usage(const std::vector<Instruction>& body, CellUsage& usage,
                          const std::string& program_name,
                          std::vector<Diagnostic>& diagnostics) {
    for (const auto& instr : body) {
        if (const auto* copy = std::get_if<CopyProgramNext>(&instr.node)) {
            if (copy->target != program_name) {
                diagnostics.push_back(
                    {instr.pos, "COPY_PROGRAM_NEXT target '" + copy->target +
                                    "' does not name this program ('" + program_name + "')"});
            }
        } else if (const auto* assign = std::get_if<Assign>(&instr.node)) {
            collect_cell(assign->dest, usage);
            if (expr_reads_cell(assign->expr)) collect_cell(assign->expr.cell, usage);
        } else if (const auto* rep = std::get_if<RepeatForever>(&instr.node)) {
            collect_usage(rep->body, usage, program_name, diagnostics);
        }
    }
}

}  // namespace detail

inline ValidationReport validate(const Program& p) {
    ValidationReport report;
    report.code_size = pretty_print(p).size();

    detail::CellUsage usage;
    detail::collect_usage(p.body, usage, p.name, report.diagnostics);

    // The machine owns exactly one data byte. VALUE and a single named
    // variable both denote it; a second distinct name cannot fit.
    if (usage.named.size() > 1) {
        report.data_cells_used = static_cast<int>(usage.named.size());
        report.diagnostics.push_back(
            {{}, "program names " + std::to_string(usage.named.size()) +
                     " byte variables; the machine has one data byte"});
    } else {
        report.data_cells_used = (usage.uses_value || !usage.named.empty()) ? 1 : 0;
    }

    if (report.code_size > kCodeLimitBytes) {
        report.diagnostics.push_back(
            {{}, "code size " + std::to_string(report.code_size) + " bytes exceeds the " +
                     std::to_string(kCodeLimitBytes) + "-byte program memory"});
    }

    bool has_repeat = contains_repeat(p.body);
    bool has_copy = contains_copy(p.body);
    if (has_repeat && has_copy) {
        report.diagnostics.push_back(
            {{}, "program mixes REPEAT and COPY_PROGRAM_NEXT; the dialects do not combine"});
    }
    if (has_repeat && usage.uses_value_next) {
        report.diagnostics.push_back(
            {{}, "VALUE_NEXT is meaningless in a looping single-machine program"});
    }

    report.ok = report.diagnostics.empty();
    return report;
}

}  // namespace zeno
