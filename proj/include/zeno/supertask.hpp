// Limit-behavior analysis on top of the cascade simulator: truncation
// sweeps, tail classification of the resulting value sequences, the
// single-machine Zeno-clock runner for REPEAT programs, and write-count
// measurement showing each cascade cell is touched only finitely often.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/cascade.hpp"

namespace zeno {

struct SequenceTooShortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VerdictKind { Converges, ParadoxUndefined, Unknown };

// An inference from finite evidence: the verdict records how much of the
// sequence it saw and which pattern it matched, never a value "at infinity".
struct SupertaskVerdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<std::uint8_t> value;  // set for Converges
    std::string witness;                // the detected pattern, human readable
    std::size_t evidence_len = 0;
};

inline std::string to_string(const SupertaskVerdict& v) {
    switch (v.kind) {
        case VerdictKind::Converges:
            return "Converges(" + std::to_string(static_cast<int>(v.value.value_or(0))) + ")";
        case VerdictKind::ParadoxUndefined:
            return "ParadoxUndefined";
        case VerdictKind::Unknown:
            return "Unknown";
    }
    return "Unknown";
}

namespace detail {

inline bool constant_from(const std::vector<std::uint8_t>& v, std::size_t p) {
    for (std::size_t i = p + 1; i < v.size(); ++i) {
        if (v[i] != v[p]) return false;
    }
    return true;
}

inline bool alternating_from(const std::vector<std::uint8_t>& v, std::size_t p) {
    for (std::size_t i = p; i + 1 < v.size(); ++i) {
        if (v[i] == v[i + 1]) return false;
    }
    for (std::size_t i = p; i + 2 < v.size(); ++i) {
        if (v[i] != v[i + 2]) return false;
    }
    return true;
}

// Discards prefixes of length 0..len/2, shortest first, and matches the
// remaining tail against a constant or a period-2 alternation.
inline SupertaskVerdict classify_values(const std::vector<std::uint8_t>& values) {
    if (values.size() < 4) {
        throw SequenceTooShortError("need at least 4 values, got " +
                                    std::to_string(values.size()));
    }
    SupertaskVerdict verdict;
    verdict.evidence_len = values.size();
    for (std::size_t p = 0; p <= values.size() / 2; ++p) {
        if (constant_from(values, p)) {
            verdict.kind = VerdictKind::Converges;
            verdict.value = values[p];
            verdict.witness = "constant " + std::to_string(static_cast<int>(values[p])) +
                              " after discarding " + std::to_string(p);
            return verdict;
        }
        if (alternating_from(values, p)) {
            verdict.kind = VerdictKind::ParadoxUndefined;
            verdict.witness = "period-2 alternation after discarding " + std::to_string(p);
            return verdict;
        }
    }
    verdict.kind = VerdictKind::Unknown;
    verdict.witness = "no constant or period-2 tail within half the sequence";
    return verdict;
}

}  // namespace detail

struct ParitySequence {
    std::string program_name;
    std::string cell;  // which byte was sampled, e.g. machine 1's VALUE
    std::vector<std::uint8_t> values;  // indexed by truncation depth 1..N_max
    TruncationMode mode = TruncationMode::Skip;
};

// Runs the program on every truncation depth 1..n_max and collects machine
// 1's final byte. A detected data race makes the sample meaningless, so it
// is promoted to an error here.
inline ParitySequence sweep(const Program& p, int n_max,
                            TruncationMode mode = TruncationMode::Skip) {
    if (n_max < 1) throw std::invalid_argument("sweep needs n_max >= 1");
    ParitySequence seq;
    seq.program_name = p.name;
    seq.cell = "VALUE_1";
    seq.mode = mode;
    seq.values.reserve(static_cast<std::size_t>(n_max));
    CascadeOptions opts;
    opts.mode = mode;
    for (int n = 1; n <= n_max; ++n) {
        RunResult r = run(p, n, opts);
        if (r.race_detected) {
            throw DataRaceError("data race at truncation depth " + std::to_string(n));
        }
        seq.values.push_back(r.final_values.at(1));
    }
    return seq;
}

inline SupertaskVerdict classify(const ParitySequence& seq) {
    return detail::classify_values(seq.values);
}

struct ZenoStep {
    int index = 0;  // 0 is initialization, k >= 1 the k-th loop iteration
    DyadicTime time;
    std::uint8_t value = 0;
};

struct ZenoTrace {
    std::vector<ZenoStep> steps;  // indices 0..step_limit
    DyadicTime limit_time = DyadicTime::one();
    std::uint64_t total_writes = 0;
};

namespace detail {

inline void check_zeno_instruction(const Instruction& instr, bool inside_loop) {
    if (std::holds_alternative<CopyProgramNext>(instr.node)) {
        throw DialectError("COPY_PROGRAM_NEXT has no meaning on a single machine");
    }
    if (const auto* rep = std::get_if<RepeatForever>(&instr.node)) {
        if (inside_loop) throw DialectError("nested REPEAT is not supported");
        for (const auto& inner : rep->body) check_zeno_instruction(inner, true);
        return;
    }
    if (const auto* assign = std::get_if<Assign>(&instr.node)) {
        bool next = assign->dest.kind == CellKind::ValueNext ||
                    (expr_reads_cell(assign->expr) &&
                     assign->expr.cell.kind == CellKind::ValueNext);
        if (next) throw DialectError("VALUE_NEXT has no meaning on a single machine");
    }
}

inline void zeno_exec(const Instruction& instr, std::uint8_t& cell,
                      std::uint64_t& writes) {
    if (const auto* assign = std::get_if<Assign>(&instr.node)) {
        std::uint8_t v = assign->expr.is_literal ? assign->expr.literal : cell;
        if (assign->expr.negated) v = static_cast<std::uint8_t>(1 - v);
        cell = v;
        ++writes;
    }
    // Idle leaves the byte untouched; the Zeno clock is indexed by loop
    // iterations, so it does not shift time either.
}

}  // namespace detail

// Single-machine run of a REPEAT program where each successive iteration
// takes half the time of the previous one: initialization finishes at t = 0
// and the k-th iteration at 1 - 2^-k, accumulating at the limit t = 1.
// Records the machine's byte after every step, up to step_limit iterations.
inline ZenoTrace run_zeno(const Program& p, int step_limit) {
    if (step_limit < 1) throw std::invalid_argument("step_limit must be >= 1");
    const RepeatForever* loop = nullptr;
    std::size_t loop_at = 0;
    for (std::size_t i = 0; i < p.body.size(); ++i) {
        if (const auto* rep = std::get_if<RepeatForever>(&p.body[i].node)) {
            loop = rep;
            loop_at = i;
            break;
        }
    }
    if (!loop) throw DialectError("program has no REPEAT loop");
    for (const auto& instr : p.body) detail::check_zeno_instruction(instr, false);

    ZenoTrace trace;
    std::uint8_t cell = 0;
    for (std::size_t i = 0; i < loop_at; ++i) {
        detail::zeno_exec(p.body[i], cell, trace.total_writes);
    }
    trace.steps.push_back({0, DyadicTime::zero(), cell});
    for (int k = 1; k <= step_limit; ++k) {
        for (const auto& instr : loop->body) {
            detail::zeno_exec(instr, cell, trace.total_writes);
        }
        DyadicTime t((BigInt(1) << static_cast<unsigned>(k)) - 1,
                     static_cast<unsigned>(k));
        trace.steps.push_back({k, std::move(t), cell});
    }
    return trace;
}

inline SupertaskVerdict classify_zeno(const ZenoTrace& z) {
    std::vector<std::uint8_t> values;
    values.reserve(z.steps.size());
    for (const auto& s : z.steps) values.push_back(s.value);
    return detail::classify_values(values);
}

struct FreenessReport {
    // per_cell_write_counts[N][cell] = stores into that cell when running
    // at truncation depth N (initialization at spawn is not a store)
    std::map<int, std::map<int, int>> per_cell_write_counts;
    bool bounded = false;
    int bound_witness = 0;  // max count over the whole sweep
};

// Measures how often each byte is written as the truncation deepens. The
// cascade is Thompson-free when the per-depth maximum settles to a constant;
// like the classifier, the first half of the sweep may be startup transient.
inline FreenessReport freeness(const Program& p, int n_max,
                               TruncationMode mode = TruncationMode::Skip) {
    if (n_max < 1) throw std::invalid_argument("freeness needs n_max >= 1");
    FreenessReport report;
    CascadeOptions opts;
    opts.mode = mode;
    std::vector<int> maxima;
    for (int n = 1; n <= n_max; ++n) {
        RunResult r = run(p, n, opts);
        if (r.race_detected) {
            throw DataRaceError("data race at truncation depth " + std::to_string(n));
        }
        auto& counts = report.per_cell_write_counts[n];
        int peak = 0;
        for (const auto& ev : r.trace) {
            for (const auto& w : ev.writes) {
                peak = std::max(peak, ++counts[w.cell]);
            }
        }
        maxima.push_back(peak);
        report.bound_witness = std::max(report.bound_witness, peak);
    }
    report.bounded = true;
    for (std::size_t i = static_cast<std::size_t>(n_max) / 2; i < maxima.size(); ++i) {
        if (maxima[i] != maxima.back()) report.bounded = false;
    }
    return report;
}

}  // namespace zeno
