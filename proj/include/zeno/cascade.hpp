// Deterministic event-driven execution of a cascade program on the finite
// truncation of the machine chain. Machine n runs with quantum tau_n = 1/2^n;
// machine n+1 exists once machine n executes COPY_PROGRAM_NEXT, is a copy of
// the same program, and starts at the copy's effect time.
//
// Effect-at-slot-end semantics: every micro-operation occupies one local
// quantum, and its reads and writes become visible exactly when that slot
// ends. Two same-cell effects sharing a timestamp, at least one of them a
// write, are a data race: the simulation halts and the result is flagged.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/ast.hpp"
#include "zeno/dyadic.hpp"

namespace zeno {

// How the last machine resolves VALUE_NEXT, which points past the
// truncation. Skip makes the whole accessing instruction a no-op (the
// quantum is still spent); PhantomZero lets reads observe 0 and drops
// writes. Skip is the default and reproduces the untruncated chain's
// parity; PhantomZero provably inverts it.
enum class TruncationMode { Skip, PhantomZero };

struct CascadeOptions {
    TruncationMode mode = TruncationMode::Skip;
    // Diagnostic mode: raise PhantomAccessError instead of resolving the
    // last machine's VALUE_NEXT either way.
    bool trap_phantom = false;
};

enum class Micro { Whole, Eval, Store };

struct CellEffect {
    int cell = 0;  // cell k is machine k's data byte
    std::uint8_t value = 0;
};

struct TraceEvent {
    int machine = 0;
    int instruction_id = 0;  // 1-based ordinal within the program body
    Micro micro = Micro::Whole;
    DyadicTime start;
    DyadicTime effect;  // start + one quantum of the executing machine
    std::vector<CellEffect> reads;
    std::vector<CellEffect> writes;  // at most one entry
};

enum class MachineStatus { NotSpawned, Running, IdleUntil, Halted };

struct DialectError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CascadeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhantomAccessError : CascadeError {
    using CascadeError::CascadeError;
};

struct DataRaceError : CascadeError {
    using CascadeError::CascadeError;
};

class CascadeState {
public:
    CascadeState(const Program& program, int truncation, CascadeOptions opts = {})
        : prog_(&program), n_(truncation), opts_(opts) {
        if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
        if (is_loop_dialect(program)) {
            throw DialectError("a REPEAT program cannot run on the cascade");
        }
        machines_.resize(static_cast<std::size_t>(n_) + 1);
        spawn(1, DyadicTime::zero());
    }

    int truncation() const { return n_; }
    const Program& program() const { return *prog_; }
    DyadicTime now() const { return now_; }
    bool race_detected() const { return race_; }

    bool done() const {
        if (race_) return true;
        for (int i = 1; i <= n_; ++i) {
            if (machines_[i].spawned && !machines_[i].halted) return false;
        }
        return true;
    }

    bool spawned(int machine) const { return at(machine).spawned; }
    std::uint8_t cell_value(int machine) const { return at(machine).value; }

    MachineStatus status(int machine) const {
        const Machine& m = at(machine);
        if (!m.spawned) return MachineStatus::NotSpawned;
        if (m.halted) return MachineStatus::Halted;
        if (m.idle_left > 0) return MachineStatus::IdleUntil;
        return MachineStatus::Running;
    }

    // Start time of the instruction following the idle; valid while the
    // machine's status is IdleUntil.
    DyadicTime idle_until(int machine) const {
        const Machine& m = at(machine);
        return m.next_start + DyadicTime::quantum(static_cast<unsigned>(machine)) * m.idle_left;
    }

    // Applies the single next effect in global effect-time order; ties go to
    // the machine with the larger index. Returns the applied event, or
    // nothing once every spawned machine has halted (or a race stopped the
    // run).
    std::optional<TraceEvent> step() {
        if (race_) return std::nullopt;
        int chosen = 0;
        DyadicTime best;
        for (int i = n_; i >= 1; --i) {
            const Machine& m = machines_[i];
            if (!m.spawned || m.halted) continue;
            DyadicTime effect = m.next_start + DyadicTime::quantum(static_cast<unsigned>(i));
            if (chosen == 0 || effect < best) {
                chosen = i;
                best = effect;
            }
        }
        if (chosen == 0) return std::nullopt;
        return execute(chosen);
    }

private:
    struct Machine {
        bool spawned = false;
        bool halted = false;
        std::size_t pc = 0;
        int micro_phase = 0;       // 1 while a two-quanta assign awaits its Store
        std::uint64_t idle_left = 0;
        std::uint8_t value = 0;
        std::uint8_t latched = 0;  // held between Eval and Store
        DyadicTime next_start;
    };

    const Machine& at(int machine) const {
        if (machine < 1 || machine > n_) throw std::out_of_range("machine index");
        return machines_[static_cast<std::size_t>(machine)];
    }

    void spawn(int index, DyadicTime start) {
        Machine& m = machines_[static_cast<std::size_t>(index)];
        m = Machine{};
        m.spawned = true;
        m.value = 0;  // all values are initialized at program start
        m.next_start = std::move(start);
        skip_zero_cost(m);
    }

    void skip_zero_cost(Machine& m) {
        while (m.pc < prog_->body.size()) {
            const auto* idle = std::get_if<Idle>(&prog_->body[m.pc].node);
            if (idle && idle->quanta == 0) {
                ++m.pc;
                continue;
            }
            return;
        }
        m.halted = true;
    }

    void finish_instruction(Machine& m, const DyadicTime& effect) {
        m.next_start = effect;
        ++m.pc;
        skip_zero_cost(m);
    }

    static std::uint8_t logical_not(std::uint8_t v) {
        if (v > 1) {
            throw CascadeError("NOT applied to non-boolean byte " + std::to_string(v));
        }
        return static_cast<std::uint8_t>(1 - v);
    }

    int cell_index(int machine, const CellRef& cell) const {
        return cell.kind == CellKind::ValueNext ? machine + 1 : machine;
    }

    std::uint8_t read_cell(int cell) const {
        // Cells of not-yet-spawned machines read as their initial 0; the
        // phantom cell past the truncation reads 0 under PhantomZero.
        if (cell >= 1 && cell <= n_) return machines_[static_cast<std::size_t>(cell)].value;
        return 0;
    }

    TraceEvent execute(int i) {
        Machine& m = machines_[static_cast<std::size_t>(i)];
        const Instruction& instr = prog_->body[m.pc];
        DyadicTime tau = DyadicTime::quantum(static_cast<unsigned>(i));

        TraceEvent ev;
        ev.machine = i;
        ev.instruction_id = static_cast<int>(m.pc) + 1;
        ev.start = m.next_start;
        ev.effect = m.next_start + tau;

        if (const auto* copy = std::get_if<CopyProgramNext>(&instr.node)) {
            (void)copy;
            if (i < n_) {
                if (machines_[static_cast<std::size_t>(i) + 1].spawned) {
                    throw CascadeError("COPY_PROGRAM_NEXT: machine " + std::to_string(i + 1) +
                                       " already holds a program");
                }
                spawn(i + 1, ev.effect);
            }
            // i == n_: nothing beyond the truncation to copy to
            finish_instruction(m, ev.effect);
        } else if (const auto* idle = std::get_if<Idle>(&instr.node)) {
            if (m.idle_left == 0) m.idle_left = idle->quanta;
            --m.idle_left;
            m.next_start = ev.effect;
            if (m.idle_left == 0) finish_instruction(m, ev.effect);
        } else if (const auto* assign = std::get_if<Assign>(&instr.node)) {
            execute_assign(i, m, *assign, ev);
        } else {
            throw DialectError("REPEAT cannot execute on the cascade");
        }

        apply(ev);
        return ev;
    }

    void execute_assign(int i, Machine& m, const Assign& assign, TraceEvent& ev) {
        bool two_quanta = assign.expr.negated && expr_reads_cell(assign.expr);
        bool touches_phantom =
            i == n_ && (cell_index(i, assign.dest) > n_ ||
                        (expr_reads_cell(assign.expr) && cell_index(i, assign.expr.cell) > n_));
        if (touches_phantom && opts_.trap_phantom) {
            throw PhantomAccessError("machine " + std::to_string(i) +
                                     " touches VALUE_NEXT past the truncation");
        }
        bool noop = touches_phantom && opts_.mode == TruncationMode::Skip;

        if (!two_quanta) {
            ev.micro = Micro::Whole;
            if (!noop) {
                std::uint8_t v;
                if (assign.expr.is_literal) {
                    v = assign.expr.negated ? logical_not(assign.expr.literal)
                                            : assign.expr.literal;
                } else {
                    int src = cell_index(i, assign.expr.cell);
                    std::uint8_t sample = read_cell(src);
                    ev.reads.push_back({src, sample});
                    v = assign.expr.negated ? logical_not(sample) : sample;
                }
                int dst = cell_index(i, assign.dest);
                if (dst <= n_) ev.writes.push_back({dst, v});  // phantom writes are dropped
            }
            finish_instruction(m, ev.effect);
        } else if (m.micro_phase == 0) {
            ev.micro = Micro::Eval;
            if (!noop) {
                int src = cell_index(i, assign.expr.cell);
                std::uint8_t sample = read_cell(src);
                ev.reads.push_back({src, sample});
                m.latched = logical_not(sample);
            }
            m.micro_phase = 1;
            m.next_start = ev.effect;
        } else {
            ev.micro = Micro::Store;
            if (!noop) {
                int dst = cell_index(i, assign.dest);
                if (dst <= n_) ev.writes.push_back({dst, m.latched});
            }
            m.micro_phase = 0;
            finish_instruction(m, ev.effect);
        }
    }

    void apply(const TraceEvent& ev) {
        if (!have_flag_time_ || ev.effect > flag_time_) {
            flag_time_ = ev.effect;
            have_flag_time_ = true;
            flags_.clear();
        }
        bool conflict = false;
        for (const auto& r : ev.reads) {
            auto it = flags_.find(r.cell);
            if (it != flags_.end() && it->second.written) conflict = true;
        }
        for (const auto& w : ev.writes) {
            auto it = flags_.find(w.cell);
            if (it != flags_.end() && (it->second.read || it->second.written)) conflict = true;
        }
        for (const auto& r : ev.reads) flags_[r.cell].read = true;
        for (const auto& w : ev.writes) {
            flags_[w.cell].written = true;
            if (w.cell >= 1 && w.cell <= n_) {
                machines_[static_cast<std::size_t>(w.cell)].value = w.value;
            }
        }
        now_ = ev.effect;
        if (conflict) race_ = true;
    }

    struct AccessFlags {
        bool read = false;
        bool written = false;
    };

    const Program* prog_;
    int n_;
    CascadeOptions opts_;
    std::vector<Machine> machines_;  // index 1..n_
    DyadicTime now_;
    bool race_ = false;
    bool have_flag_time_ = false;
    DyadicTime flag_time_;
    std::map<int, AccessFlags> flags_;  // effects seen at flag_time_
};

inline CascadeState spawn_root(const Program& p, int truncation, CascadeOptions opts = {}) {
    return CascadeState(p, truncation, opts);
}

struct RunResult {
    std::vector<TraceEvent> trace;         // ordered by effect time
    std::map<int, std::uint8_t> final_values;  // spawned machines only
    DyadicTime completion_time;
    bool race_detected = false;
};

inline RunResult run(const Program& p, int truncation, CascadeOptions opts = {}) {
    CascadeState state(p, truncation, opts);
    RunResult result;
    while (auto ev = state.step()) result.trace.push_back(std::move(*ev));
    for (int i = 1; i <= truncation; ++i) {
        if (state.spawned(i)) result.final_values[i] = state.cell_value(i);
    }
    if (!result.trace.empty()) result.completion_time = result.trace.back().effect;
    result.race_detected = state.race_detected();
    return result;
}

// Closed-form start times of the four instruction slots of the cascade
// listing on machine n: (1-2^(1-n), 1-2^-n, 1+2^-n, 1+2^-n+2^(1-n)); the
// fourth entry is the exit time.
inline std::array<DyadicTime, 4> predicted_schedule(int n) {
    if (n < 1) throw std::invalid_argument("machine index must be >= 1");
    unsigned u = static_cast<unsigned>(n);
    return {
        DyadicTime((BigInt(1) << (u - 1)) - 1, u - 1),
        DyadicTime((BigInt(1) << u) - 1, u),
        DyadicTime((BigInt(1) << u) + 1, u),
        DyadicTime((BigInt(1) << u) + 3, u),
    };
}

struct MachineTimeline {
    int machine = 0;
    std::vector<std::pair<int, DyadicTime>> instruction_starts;  // (instruction_id, start)
    DyadicTime exit_time;
};

inline std::vector<MachineTimeline> extract_timelines(const RunResult& result) {
    std::map<int, MachineTimeline> by_machine;
    for (const auto& ev : result.trace) {
        MachineTimeline& tl = by_machine[ev.machine];
        tl.machine = ev.machine;
        if (tl.instruction_starts.empty() ||
            tl.instruction_starts.back().first != ev.instruction_id) {
            tl.instruction_starts.emplace_back(ev.instruction_id, ev.start);
        }
        tl.exit_time = ev.effect;
    }
    std::vector<MachineTimeline> out;
    out.reserve(by_machine.size());
    for (auto& [index, tl] : by_machine) out.push_back(std::move(tl));
    return out;
}

inline const char* micro_name(Micro m) {
    switch (m) {
        case Micro::Whole: return "whole";
        case Micro::Eval: return "eval";
        case Micro::Store: return "store";
    }
    return "?";
}

// One event per line, stable field order, canonical dyadic times.
inline std::string trace_line(const TraceEvent& ev) {
    auto effects = [](const std::vector<CellEffect>& list) {
        if (list.empty()) return std::string("-");
        std::string s;
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (k) s += ',';
            s += std::to_string(list[k].cell) + ":" + std::to_string(list[k].value);
        }
        return s;
    };
    return "machine=" + std::to_string(ev.machine) +
           " instr=" + std::to_string(ev.instruction_id) +
           " micro=" + std::string(micro_name(ev.micro)) +
           " start=" + ev.start.canonical() +
           " effect=" + ev.effect.canonical() +
           " reads=" + effects(ev.reads) +
           " writes=" + effects(ev.writes);
}

inline std::string serialize_trace(const std::vector<TraceEvent>& trace) {
    std::string out;
    for (const auto& ev : trace) {
        out += trace_line(ev);
        out += '\n';
    }
    return out;
}

}  // namespace zeno
