// zc: command-line front end for the cascade toolkit.
//
// Exit codes: 0 success, 1 usage problems (flags, unreadable files, depth
// caps), 2 program errors (lexing, parsing, validation, wrong dialect,
// not enough evidence to classify), 3 simulation errors (data races,
// invalid trap geometry, trapped edge accesses).

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zeno/cascade.hpp"
#include "zeno/diagram.hpp"
#include "zeno/lexer.hpp"
#include "zeno/mousetrap.hpp"
#include "zeno/parser.hpp"
#include "zeno/printer.hpp"
#include "zeno/supertask.hpp"
#include "zeno/validate.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr const char* kThompsonSource =
    "PROGRAM thompson:\n"
    "  a := 0;\n"
    "  REPEAT\n"
    "    a := NOT a;\n"
    "  UNTIL FALSE;\n"
    "END thompson;\n";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw UsageError("cannot write '" + path + "'");
    out << content;
}

int depth_cap() {
    const char* env = std::getenv("ZC_MAX_DEPTH");
    if (!env || !*env) return 64;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1000000) {
        throw UsageError("ZC_MAX_DEPTH must be a positive integer");
    }
    return static_cast<int>(v);
}

int checked_depth(int n, const std::string& what) {
    int cap = depth_cap();
    if (n > cap) {
        throw UsageError(what + " " + std::to_string(n) + " exceeds the depth cap " +
                         std::to_string(cap) + " (raise ZC_MAX_DEPTH to override)");
    }
    return n;
}

zeno::Program load_checked(const std::string& path, bool& valid) {
    zeno::Program p = zeno::parse_source(read_file(path));
    zeno::ValidationReport report = zeno::validate(p);
    valid = report.ok;
    for (const auto& d : report.diagnostics) {
        std::cerr << "diagnostic: ";
        if (d.pos.line > 0) std::cerr << d.pos.line << ":" << d.pos.column << ": ";
        std::cerr << d.message << "\n";
    }
    return p;
}

zeno::Program load_valid(const std::string& path) {
    bool valid = false;
    zeno::Program p = load_checked(path, valid);
    if (!valid) throw zeno::ParseError(zeno::SourcePos{0, 0}, "program failed validation");
    return p;
}

zeno::TruncationMode mode_from(const std::string& name) {
    return name == "phantom" ? zeno::TruncationMode::PhantomZero
                             : zeno::TruncationMode::Skip;
}

zeno::DyadicTime parse_dyadic_flag(const std::string& text) {
    std::size_t caret = text.find("/2^");
    try {
        if (caret == std::string::npos) {
            std::size_t used = 0;
            unsigned long long whole = std::stoull(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return zeno::DyadicTime(whole, 0);
        }
        std::size_t used = 0;
        unsigned long long num = std::stoull(text.substr(0, caret), &used);
        if (used != caret) throw std::invalid_argument(text);
        unsigned long long exp = std::stoull(text.substr(caret + 3), &used);
        if (used != text.size() - caret - 3 || exp > 4096) {
            throw std::invalid_argument(text);
        }
        return zeno::DyadicTime(num, static_cast<unsigned>(exp));
    } catch (const std::exception&) {
        throw UsageError("expected a time like 3 or 5/2^1, got '" + text + "'");
    }
}

std::string time_both(const zeno::DyadicTime& t) {
    return t.canonical() + " (" + t.decimal_exact() + ")";
}

std::string lamp_cell_name(const zeno::Program& p) {
    std::function<const std::string*(const std::vector<zeno::Instruction>&)> scan =
        [&scan](const std::vector<zeno::Instruction>& body) -> const std::string* {
        for (const auto& instr : body) {
            if (const auto* assign = std::get_if<zeno::Assign>(&instr.node)) {
                if (assign->dest.kind == zeno::CellKind::Named) return &assign->dest.name;
                if (zeno::expr_reads_cell(assign->expr) &&
                    assign->expr.cell.kind == zeno::CellKind::Named) {
                    return &assign->expr.cell.name;
                }
            } else if (const auto* rep = std::get_if<zeno::RepeatForever>(&instr.node)) {
                if (const std::string* name = scan(rep->body)) return name;
            }
        }
        return nullptr;
    };
    const std::string* name = scan(p.body);
    return name ? *name : std::string("VALUE");
}

int cmd_parse(const std::string& path, bool pretty) {
    if (pretty) {
        zeno::Program p = zeno::parse_source(read_file(path));
        std::cout << zeno::pretty_print(p);
        return 0;
    }
    bool valid = false;
    zeno::Program p = load_checked(path, valid);
    zeno::ValidationReport report = zeno::validate(p);
    std::cout << "program: " << p.name << "\n";
    std::cout << "dialect: " << (zeno::contains_repeat(p.body) ? "loop" : "cascade")
              << "\n";
    std::cout << "code_size: " << report.code_size << " bytes (limit "
              << zeno::kCodeLimitBytes << ")\n";
    std::cout << "data_cells: " << report.data_cells_used << "\n";
    std::cout << (valid ? "ok" : "invalid") << "\n";
    return valid ? 0 : 2;
}

int cmd_run(const std::string& path, int machines, const std::string& mode,
            bool trap_phantom, const std::string& trace_path) {
    zeno::Program p = load_valid(path);
    zeno::CascadeOptions opts;
    opts.mode = mode_from(mode);
    opts.trap_phantom = trap_phantom;
    zeno::RunResult r = zeno::run(p, checked_depth(machines, "--machines"), opts);
    if (!trace_path.empty()) write_output(trace_path, zeno::serialize_trace(r.trace));
    for (const auto& [machine, value] : r.final_values) {
        std::cout << "VALUE_" << machine << " = " << static_cast<int>(value) << "\n";
    }
    std::cout << "completion_time = " << time_both(r.completion_time) << "\n";
    if (r.race_detected) {
        std::cerr << "data race detected at t=" << r.completion_time.canonical() << "\n";
        return 3;
    }
    return 0;
}

int cmd_sweep(const std::string& path, int n_max, const std::string& mode) {
    zeno::Program p = load_valid(path);
    zeno::ParitySequence seq =
        zeno::sweep(p, checked_depth(n_max, "--max"), mode_from(mode));
    std::cout << "N,VALUE_1,verdict\n";
    for (int n = 1; n <= n_max; ++n) {
        std::cout << n << "," << static_cast<int>(seq.values[static_cast<std::size_t>(n) - 1])
                  << ",";
        if (n < 4) {
            std::cout << "-\n";
            continue;
        }
        zeno::ParitySequence prefix = seq;
        prefix.values.resize(static_cast<std::size_t>(n));
        std::cout << zeno::to_string(zeno::classify(prefix)) << "\n";
    }
    zeno::SupertaskVerdict verdict = zeno::classify(seq);
    std::cout << "verdict: " << zeno::to_string(verdict) << " (evidence N_max=" << n_max
              << ")\n";
    return 0;
}

int cmd_thompson(int steps, const std::string& file) {
    zeno::Program p =
        file.empty() ? zeno::parse_source(kThompsonSource) : load_valid(file);
    zeno::ZenoTrace trace = zeno::run_zeno(p, steps);
    std::string cell = lamp_cell_name(p);
    for (const auto& s : trace.steps) {
        std::cout << "step " << s.index << ": t=" << time_both(s.time) << " " << cell
                  << "=" << static_cast<int>(s.value) << "\n";
    }
    std::cout << "limit_time = " << time_both(trace.limit_time) << "\n";
    std::cout << "total_writes = " << trace.total_writes << "\n";
    if (trace.steps.size() >= 4) {
        std::cout << "verdict: " << zeno::to_string(zeno::classify_zeno(trace))
                  << " (evidence steps=" << steps << ")\n";
    } else {
        std::cout << "verdict: - (not enough steps to classify)\n";
    }
    return 0;
}

int cmd_mousetrap(const std::string& config_path, int traps, const std::string& offset,
                  const std::string& velocity, const std::string& length, bool sweep_mode,
                  const std::string& events_path) {
    zeno::MousetrapConfig cfg;
    if (!config_path.empty()) {
        cfg = zeno::parse_config(read_file(config_path));
    } else {
        cfg = zeno::make_config(traps, zeno::parse_rational(offset),
                                zeno::parse_rational(velocity),
                                zeno::parse_rational(length));
    }
    checked_depth(cfg.traps, "--traps");

    if (sweep_mode) {
        zeno::ParitySequence parity;
        parity.program_name = "mousetrap";
        parity.cell = "beam_1";
        std::cout << "N,largest_beam\n";
        for (int n = 1; n <= cfg.traps; ++n) {
            zeno::MousetrapConfig sub = cfg;
            sub.traps = n;
            sub.thread_distance.resize(static_cast<std::size_t>(n));
            sub.block_distance.resize(static_cast<std::size_t>(n) - 1);
            zeno::BeamState top = zeno::largest_beam(zeno::simulate(sub).final_state);
            parity.values.push_back(top == zeno::BeamState::Latched ? 1 : 0);
            std::cout << n << "," << zeno::beam_name(top) << "\n";
        }
        if (parity.values.size() >= 4) {
            std::cout << "verdict: " << zeno::to_string(zeno::classify(parity))
                      << " (evidence N_max=" << cfg.traps << ")\n";
        } else {
            std::cout << "verdict: - (not enough traps to classify)\n";
        }
        return 0;
    }

    zeno::MousetrapResult r = zeno::simulate(cfg);
    std::string log = zeno::event_log(r.events);
    if (!events_path.empty()) {
        write_output(events_path, log);
    } else {
        std::cout << log;
    }
    std::cout << "largest_beam = " << zeno::beam_name(zeno::largest_beam(r.final_state))
              << "\n";
    return 0;
}

int cmd_diagram(const std::string& path, int machines, const std::string& format,
                const std::string& t_max, int width, const std::string& out_path) {
    zeno::Program p = load_valid(path);
    zeno::DiagramOptions opts;
    opts.t_max = parse_dyadic_flag(t_max);
    opts.width = width;
    zeno::TimingDiagram d =
        zeno::build_diagram(p, checked_depth(machines, "--machines"), opts);
    zeno::DiagramFormat f =
        format == "svg" ? zeno::DiagramFormat::Svg : zeno::DiagramFormat::Text;
    write_output(out_path, zeno::render(d, f));
    return 0;
}

int guarded(const std::function<int()>& action) {
    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const zeno::LexError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zeno::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zeno::DialectError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zeno::SequenceTooShortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zeno::DataRaceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const zeno::PhantomAccessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const zeno::InvalidConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const zeno::CascadeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator for self-replicating half-time machine cascades"};
    app.require_subcommand(1);

    std::function<int()> action;

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "check a program and report on it");
    std::string parse_file;
    bool parse_pretty = false;
    parse_cmd->add_option("file", parse_file, "program source")->required();
    parse_cmd->add_flag("--pretty", parse_pretty, "print the canonical form instead");
    parse_cmd->callback([&] { action = [&] { return cmd_parse(parse_file, parse_pretty); }; });

    // run
    auto* run_cmd = app.add_subcommand("run", "execute a cascade program");
    std::string run_file, run_mode = "skip", run_trace;
    int run_machines = 1;
    bool run_trap = false;
    run_cmd->add_option("file", run_file, "program source")->required();
    run_cmd->add_option("--machines", run_machines, "truncation depth N")
        ->check(CLI::Range(1, 1000000));
    run_cmd->add_option("--mode", run_mode, "edge handling for the last machine")
        ->check(CLI::IsMember({"skip", "phantom"}));
    run_cmd->add_flag("--trap-phantom", run_trap, "fail loudly on edge access");
    run_cmd->add_option("--trace", run_trace, "write the event trace here ('-' = stdout)");
    run_cmd->callback([&] {
        action = [&] { return cmd_run(run_file, run_machines, run_mode, run_trap, run_trace); };
    });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run at every depth 1..N and classify");
    std::string sweep_file, sweep_mode = "skip";
    int sweep_max = 8;
    sweep_cmd->add_option("file", sweep_file, "program source")->required();
    sweep_cmd->add_option("--max", sweep_max, "largest truncation depth")
        ->check(CLI::Range(1, 1000000));
    sweep_cmd->add_option("--mode", sweep_mode, "edge handling for the last machine")
        ->check(CLI::IsMember({"skip", "phantom"}));
    sweep_cmd->callback([&] {
        action = [&] { return cmd_sweep(sweep_file, sweep_max, sweep_mode); };
    });

    // thompson
    auto* th_cmd = app.add_subcommand("thompson", "run a REPEAT program on the Zeno clock");
    int th_steps = 20;
    std::string th_file;
    th_cmd->add_option("--steps", th_steps, "number of loop iterations")
        ->check(CLI::Range(1, 1000000));
    th_cmd->add_option("--file", th_file, "loop program (defaults to the lamp toggler)");
    th_cmd->callback([&] { action = [&] { return cmd_thompson(th_steps, th_file); }; });

    // mousetrap
    auto* mt_cmd = app.add_subcommand("mousetrap", "simulate the chain of scaled traps");
    std::string mt_config, mt_offset = "0", mt_velocity = "1", mt_length = "1", mt_events;
    int mt_traps = 3;
    bool mt_sweep = false;
    auto* cfg_opt = mt_cmd->add_option("--config", mt_config, "key=value geometry file");
    mt_cmd->add_option("--traps", mt_traps, "number of traps N")
        ->check(CLI::Range(1, 1000000))
        ->excludes(cfg_opt);
    mt_cmd->add_option("--offset", mt_offset, "constant added to all distances")
        ->excludes(cfg_opt);
    mt_cmd->add_option("--velocity", mt_velocity, "ball speed")->excludes(cfg_opt);
    mt_cmd->add_option("--length", mt_length, "base length L")->excludes(cfg_opt);
    mt_cmd->add_flag("--sweep", mt_sweep, "print largest-beam parity for 1..N");
    mt_cmd->add_option("--events", mt_events, "write the event log here ('-' = stdout)");
    mt_cmd->callback([&] {
        action = [&] {
            return cmd_mousetrap(mt_config, mt_traps, mt_offset, mt_velocity, mt_length,
                                 mt_sweep, mt_events);
        };
    });

    // diagram
    auto* dia_cmd = app.add_subcommand("diagram", "draw instruction-start lanes");
    std::string dia_file, dia_format = "text", dia_tmax = "3", dia_out = "-";
    int dia_machines = 3, dia_width = 72;
    dia_cmd->add_option("file", dia_file, "program source")->required();
    dia_cmd->add_option("--machines", dia_machines, "lanes to draw")
        ->check(CLI::Range(1, 1000000));
    dia_cmd->add_option("--format", dia_format, "text or svg")
        ->check(CLI::IsMember({"text", "svg"}));
    dia_cmd->add_option("--t-max", dia_tmax, "axis end, e.g. 3 or 5/2^1");
    dia_cmd->add_option("--width", dia_width, "bar width in columns")
        ->check(CLI::Range(2, 4096));
    dia_cmd->add_option("--out", dia_out, "output path ('-' = stdout)");
    dia_cmd->callback([&] {
        action = [&] {
            return cmd_diagram(dia_file, dia_machines, dia_format, dia_tmax, dia_width,
                               dia_out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    return guarded(action);
}
