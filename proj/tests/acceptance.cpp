// Release gate: one pass/fail line per criterion, nonzero exit if any fail.
// Unlike the unit suites this runs the library end to end at full scale.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "chain_oracle.hpp"
#include "zeno/cascade.hpp"
#include "zeno/mousetrap.hpp"
#include "zeno/parser.hpp"
#include "zeno/printer.hpp"
#include "zeno/supertask.hpp"

using namespace zeno;

namespace {

struct Gate {
    int failures = 0;

    void criterion(const std::string& label, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        auto before = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - before)
                             .count();
        if (ok && budget_seconds > 0 && elapsed >= budget_seconds) {
            ok = false;
            detail = "took " + std::to_string(elapsed) + " s, budget " +
                     std::to_string(budget_seconds) + " s";
        }
        if (!ok) ++failures;
        std::printf("%s: %s%s%s\n", ok ? "pass" : "FAIL", label.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
    }
};

Program load(const char* name) {
    std::ifstream in(std::filesystem::path(ZC_PROGRAMS_DIR) / name);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_source(buf.str());
}

}  // namespace

int main() {
    Gate gate;
    const Program puzzle = load("puzzle.zc");
    const Program thompson = load("thompson.zc");

    gate.criterion(
        "instruction schedule matches the closed form exactly, machines 1..64",
        1.0, [&](std::string& detail) {
            RunResult r = run(puzzle, 64);
            auto timelines = extract_timelines(r);
            if (timelines.size() != 64) {
                detail = "expected 64 timelines";
                return false;
            }
            for (const auto& tl : timelines) {
                auto want = predicted_schedule(tl.machine);
                if (tl.instruction_starts.size() != 3 ||
                    tl.instruction_starts[0].second != want[0] ||
                    tl.instruction_starts[1].second != want[1] ||
                    tl.instruction_starts[2].second != want[2] ||
                    tl.exit_time != want[3]) {
                    detail = "machine " + std::to_string(tl.machine) + " deviates";
                    return false;
                }
            }
            return true;
        });

    gate.criterion(
        "depth sweep alternates 0,1,0,1 and classifies as ParadoxUndefined",
        1.0, [&](std::string& detail) {
            ParitySequence seq = sweep(puzzle, 20, TruncationMode::Skip);
            for (std::size_t i = 0; i < seq.values.size(); ++i) {
                int n = static_cast<int>(i) + 1;
                std::uint8_t want = (n % 2 == 0) ? 1 : 0;
                if (seq.values[i] != want) {
                    detail = "depth " + std::to_string(n) + " got " +
                             std::to_string(static_cast<int>(seq.values[i]));
                    return false;
                }
            }
            SupertaskVerdict v = classify(seq);
            if (v.kind != VerdictKind::ParadoxUndefined) {
                detail = "verdict " + to_string(v);
                return false;
            }
            return true;
        });

    gate.criterion(
        "race-free: every handoff store strictly precedes its read, depths 1..64",
        0.0, [&](std::string& detail) {
            for (int depth = 1; depth <= 64; ++depth) {
                RunResult r = run(puzzle, depth);
                if (r.race_detected) {
                    detail = "race at depth " + std::to_string(depth);
                    return false;
                }
                // The deepest machine's handoff assign is a whole no-op, so
                // cell `depth` has a reader but no writer; every other
                // handoff must have both, in strict store-then-read order.
                for (int n = 1; n < depth; ++n) {
                    const DyadicTime* store = nullptr;
                    const DyadicTime* eval = nullptr;
                    for (const auto& ev : r.trace) {
                        if (ev.machine == n + 1 && ev.micro == Micro::Store &&
                            !ev.writes.empty() && ev.writes[0].cell == n + 1) {
                            store = &ev.effect;
                        }
                        if (ev.machine == n && ev.micro == Micro::Eval &&
                            !ev.reads.empty() && ev.reads[0].cell == n + 1) {
                            eval = &ev.effect;
                        }
                    }
                    bool expect_store = n + 1 < depth;
                    bool ok = eval && (expect_store ? (store && *store < *eval)
                                                    : store == nullptr);
                    if (!ok) {
                        detail = "handoff " + std::to_string(n + 1) + "->" +
                                 std::to_string(n) + " at depth " +
                                 std::to_string(depth) + " not strictly ordered";
                        return false;
                    }
                }
            }
            return true;
        });

    gate.criterion(
        "toggle timetable: value k mod 2 at time 1 - 2^-k, 20 steps, ParadoxUndefined",
        0.0, [&](std::string& detail) {
            ZenoTrace z = run_zeno(thompson, 20);
            if (z.steps.size() != 21) {
                detail = "expected 21 rows";
                return false;
            }
            for (int k = 1; k <= 20; ++k) {
                const ZenoStep& s = z.steps[static_cast<std::size_t>(k)];
                unsigned u = static_cast<unsigned>(k);
                DyadicTime want((BigInt(1) << u) - 1, u);
                if (s.time != want || s.value != k % 2) {
                    detail = "row " + std::to_string(k) + " off";
                    return false;
                }
            }
            SupertaskVerdict v = classify_zeno(z);
            if (v.kind != VerdictKind::ParadoxUndefined) {
                detail = "verdict " + to_string(v);
                return false;
            }
            return true;
        });

    gate.criterion(
        "write budgets: chained run stays at 1 write per cell, looped cell grows with steps",
        0.0, [&](std::string& detail) {
            FreenessReport fr = freeness(puzzle, 20);
            if (!fr.bounded || fr.bound_witness != 1) {
                detail = "chain bound " + std::to_string(fr.bound_witness);
                return false;
            }
            for (const auto& [depth, counts] : fr.per_cell_write_counts) {
                for (const auto& [cell, count] : counts) {
                    if (count > 1) {
                        detail = "cell " + std::to_string(cell) + " written " +
                                 std::to_string(count) + " times at depth " +
                                 std::to_string(depth);
                        return false;
                    }
                }
            }
            for (int steps : {5, 10, 20, 40, 80}) {
                std::uint64_t writes = run_zeno(thompson, steps).total_writes;
                if (writes != static_cast<std::uint64_t>(steps) + 1) {
                    detail = "loop writes at " + std::to_string(steps) +
                             " steps: " + std::to_string(writes);
                    return false;
                }
            }
            return true;
        });

    gate.criterion(
        "largest beam latched iff trap count odd (1..15), invariant under offsets 0,1,10",
        1.0, [&](std::string& detail) {
            for (const Rational& offset :
                 {Rational(0), Rational(1), Rational(10)}) {
                for (int traps = 1; traps <= 15; ++traps) {
                    MousetrapConfig cfg =
                        make_config(traps, offset, Rational(1), Rational(1));
                    if (!validate_config(cfg).empty()) {
                        detail = "default geometry rejected at " +
                                 std::to_string(traps) + " traps";
                        return false;
                    }
                    MousetrapResult res = simulate(cfg);
                    BeamState want = (traps % 2 == 1) ? BeamState::Latched
                                                      : BeamState::Vertical;
                    if (largest_beam(res.final_state) != want) {
                        detail = "offset " + rational_str(offset) + ", " +
                                 std::to_string(traps) + " traps";
                        return false;
                    }
                }
            }
            return true;
        });

    gate.criterion(
        "phantom-zero truncation inverts every swept value, cross-checked by a "
        "timing-free chain oracle, depths 1..10",
        0.0, [&](std::string& detail) {
            ParitySequence skip = sweep(puzzle, 10, TruncationMode::Skip);
            ParitySequence phantom = sweep(puzzle, 10, TruncationMode::PhantomZero);
            for (std::size_t i = 0; i < 10; ++i) {
                if (phantom.values[i] != 1 - skip.values[i]) {
                    detail = "no inversion at depth " + std::to_string(i + 1);
                    return false;
                }
            }
            for (TruncationMode mode :
                 {TruncationMode::Skip, TruncationMode::PhantomZero}) {
                CascadeOptions opts;
                opts.mode = mode;
                for (int depth = 1; depth <= 10; ++depth) {
                    auto expected = oracle::chain_final_values(puzzle, depth, mode);
                    RunResult r = run(puzzle, depth, opts);
                    for (int m = 1; m <= depth; ++m) {
                        if (expected[static_cast<std::size_t>(m) - 1] !=
                            r.final_values.at(m)) {
                            detail = "oracle disagrees at depth " +
                                     std::to_string(depth) + " machine " +
                                     std::to_string(m);
                            return false;
                        }
                    }
                }
            }
            return true;
        });

    gate.criterion(
        "deterministic traces and a stable pretty-print round-trip over the corpus",
        0.0, [&](std::string& detail) {
            std::string first = serialize_trace(run(puzzle, 8).trace);
            for (int i = 0; i < 2; ++i) {
                if (serialize_trace(run(puzzle, 8).trace) != first) {
                    detail = "trace bytes changed between runs";
                    return false;
                }
            }
            MousetrapConfig cfg = make_config(6, Rational(0), Rational(1), Rational(1));
            if (event_log(simulate(cfg).events) != event_log(simulate(cfg).events)) {
                detail = "event log bytes changed between runs";
                return false;
            }
            for (const auto& entry :
                 std::filesystem::directory_iterator(ZC_PROGRAMS_DIR)) {
                if (entry.path().extension() != ".zc") continue;
                std::ifstream in(entry.path());
                std::stringstream buf;
                buf << in.rdbuf();
                Program once = parse_source(buf.str());
                std::string printed = pretty_print(once);
                Program twice = parse_source(printed);
                if (pretty_print(twice) != printed) {
                    detail = "round-trip drift for " + entry.path().filename().string();
                    return false;
                }
            }
            return true;
        });

    if (gate.failures > 0) {
        std::printf("%d criterion(s) failed\n", gate.failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
