// Kinematic model of the chain of half-size mousetraps: ball n travels at
// speed v toward its thread at distance d_n, passing the latch plane of
// beam n+1 at distance b_n on the way. A torn thread latches its beam
// instantly, and a latched beam stops the next larger ball at the plane.
// All times are exact rationals; the whole construction is an ordering
// argument, so tolerance-based comparison is out of the question.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zeno {

using Rational = boost::multiprecision::cpp_rational;

struct InvalidConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MousetrapConfig {
    int traps = 0;       // N
    Rational offset;     // c, added to every distance
    Rational velocity;   // v, shared by all balls
    std::vector<Rational> thread_distance;  // d_1..d_N
    std::vector<Rational> block_distance;   // b_1..b_{N-1}
};

// Default geometry d_n = c + 2L/2^n, b_n = c + 3L/2^(n+1); this keeps
// d_{n+1} < b_n < d_n with margin for every offset c >= 0.
inline MousetrapConfig make_config(int traps, const Rational& offset,
                                   const Rational& velocity, const Rational& base_length) {
    MousetrapConfig cfg;
    cfg.traps = traps;
    cfg.offset = offset;
    cfg.velocity = velocity;
    for (int n = 1; n <= traps; ++n) {
        Rational pow2(boost::multiprecision::cpp_int(1) << static_cast<unsigned>(n));
        cfg.thread_distance.push_back(offset + 2 * base_length / pow2);
        if (n < traps) {
            cfg.block_distance.push_back(offset + 3 * base_length / (2 * pow2));
        }
    }
    return cfg;
}

enum class ViolationKind {
    TearBeforeBlock,   // d_{n+1} < b_n failed: the small ball would tear too late
    BlockBeyondThread, // b_n < d_n failed: the latch plane lies past the thread
    Structure,         // sizes, signs, or speed make the config meaningless
};

struct ConfigViolation {
    ViolationKind kind = ViolationKind::Structure;
    int pair = 0;  // between trap pair (n, n+1); 0 for structural problems
    std::string detail;
};

inline const char* violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::TearBeforeBlock: return "tear-before-block";
        case ViolationKind::BlockBeyondThread: return "b<d";
        case ViolationKind::Structure: return "structure";
    }
    return "?";
}

inline std::vector<ConfigViolation> validate_config(const MousetrapConfig& cfg) {
    std::vector<ConfigViolation> out;
    auto structural = [&out](const std::string& detail) {
        out.push_back({ViolationKind::Structure, 0, detail});
    };
    if (cfg.traps < 1) structural("need at least one trap");
    if (cfg.velocity <= 0) structural("velocity must be positive");
    if (cfg.offset < 0) structural("offset must be nonnegative");
    if (cfg.thread_distance.size() != static_cast<std::size_t>(std::max(cfg.traps, 0))) {
        structural("expected one thread distance per trap");
    }
    if (cfg.traps >= 1 &&
        cfg.block_distance.size() != static_cast<std::size_t>(cfg.traps) - 1) {
        structural("expected one block distance per adjacent pair");
    }
    if (!out.empty()) return out;

    for (const Rational& d : cfg.thread_distance) {
        if (d <= 0) structural("thread distances must be positive");
    }
    for (const Rational& b : cfg.block_distance) {
        if (b <= 0) structural("block distances must be positive");
    }
    for (int n = 1; n < cfg.traps; ++n) {
        const Rational& d_here = cfg.thread_distance[static_cast<std::size_t>(n) - 1];
        const Rational& d_next = cfg.thread_distance[static_cast<std::size_t>(n)];
        const Rational& b_here = cfg.block_distance[static_cast<std::size_t>(n) - 1];
        if (!(b_here < d_here)) {
            out.push_back({ViolationKind::BlockBeyondThread, n,
                           "pair (" + std::to_string(n) + "," + std::to_string(n + 1) +
                               "): need b_" + std::to_string(n) + " < d_" + std::to_string(n)});
        }
        if (!(d_next < b_here)) {
            out.push_back({ViolationKind::TearBeforeBlock, n,
                           "pair (" + std::to_string(n) + "," + std::to_string(n + 1) +
                               "): need d_" + std::to_string(n + 1) + " < b_" +
                               std::to_string(n)});
        }
    }
    return out;
}

enum class BeamState { Vertical, Latched };
enum class ThreadState { Intact, Torn };
enum class BallState { Moving, Blocked, Done };

struct MechEvent {
    enum class Kind { ThreadTorn, BeamLatched, BallBlocked, BallStopped };
    Rational time;
    Kind kind = Kind::ThreadTorn;
    int trap = 0;
    int other = 0;  // for BallBlocked: the beam doing the blocking
};

struct MechState {
    std::map<int, BeamState> beams;
    std::map<int, ThreadState> threads;
    std::map<int, BallState> balls;
};

struct MousetrapResult {
    std::vector<MechEvent> events;  // global time order
    MechState final_state;
};

// Resolves each lane bottom-up: the smallest ball always tears its thread;
// ball n is stopped at its latch plane iff beam n+1 latched at or before
// the moment ball n arrives there, and otherwise runs on to its own thread.
inline MousetrapResult simulate(const MousetrapConfig& cfg) {
    auto violations = validate_config(cfg);
    if (!violations.empty()) {
        throw InvalidConfigError("invalid mousetrap config: " + violations.front().detail);
    }

    int n_traps = cfg.traps;
    std::vector<bool> torn(static_cast<std::size_t>(n_traps) + 2, false);
    std::vector<Rational> tear_time(static_cast<std::size_t>(n_traps) + 2);
    MousetrapResult result;
    for (int n = n_traps; n >= 1; --n) {
        Rational arrive_thread = cfg.thread_distance[static_cast<std::size_t>(n) - 1] /
                                 cfg.velocity;
        bool blocked = false;
        Rational block_at;
        if (n < n_traps && torn[static_cast<std::size_t>(n) + 1]) {
            block_at = cfg.block_distance[static_cast<std::size_t>(n) - 1] / cfg.velocity;
            blocked = tear_time[static_cast<std::size_t>(n) + 1] <= block_at;
        }
        if (blocked) {
            result.events.push_back({block_at, MechEvent::Kind::BallBlocked, n, n + 1});
            result.final_state.balls[n] = BallState::Blocked;
            result.final_state.beams[n] = BeamState::Vertical;
            result.final_state.threads[n] = ThreadState::Intact;
        } else {
            torn[static_cast<std::size_t>(n)] = true;
            tear_time[static_cast<std::size_t>(n)] = arrive_thread;
            result.events.push_back({arrive_thread, MechEvent::Kind::ThreadTorn, n, 0});
            result.events.push_back({arrive_thread, MechEvent::Kind::BeamLatched, n, 0});
            result.final_state.balls[n] = BallState::Done;
            result.final_state.beams[n] = BeamState::Latched;
            result.final_state.threads[n] = ThreadState::Torn;
        }
    }
    std::sort(result.events.begin(), result.events.end(),
              [](const MechEvent& a, const MechEvent& b) {
                  if (a.time != b.time) return a.time < b.time;
                  if (a.trap != b.trap) return a.trap > b.trap;
                  return static_cast<int>(a.kind) < static_cast<int>(b.kind);
              });
    return result;
}

inline BeamState largest_beam(const MechState& state) { return state.beams.at(1); }

inline std::string rational_str(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

// Accepts "p/q", plain integers, and decimal fractions like "1.5".
inline Rational parse_rational(const std::string& text) {
    auto fail = [&text]() -> Rational {
        throw InvalidConfigError("cannot read number: '" + text + "'");
    };
    std::size_t a = text.find_first_not_of(" \t");
    std::size_t b = text.find_last_not_of(" \t");
    if (a == std::string::npos) return fail();
    std::string s = text.substr(a, b - a + 1);

    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) return fail();

    auto digits_to_int = [&fail](const std::string& digits) {
        if (digits.empty()) return fail();
        for (char c : digits) {
            if (c < '0' || c > '9') return fail();
        }
        return Rational(boost::multiprecision::cpp_int(digits));
    };

    Rational value;
    std::size_t slash = s.find('/');
    std::size_t dot = s.find('.');
    if (slash != std::string::npos) {
        Rational num = digits_to_int(s.substr(0, slash));
        Rational den = digits_to_int(s.substr(slash + 1));
        if (den == 0) return fail();
        value = num / den;
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) return fail();
        if (whole.empty()) whole = "0";
        value = digits_to_int(whole);
        if (!frac.empty()) {
            Rational scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            value += digits_to_int(frac) / scale;
        }
    } else {
        value = digits_to_int(s);
    }
    return negative ? -value : value;
}

// Plain-text key/value config: traps, offset, velocity, length, and
// optional comma-separated d/b lists overriding the default geometry.
inline MousetrapConfig parse_config(const std::string& text) {
    int traps = 0;
    bool have_traps = false;
    Rational offset = 0, velocity = 1, length = 1;
    std::vector<Rational> d_override, b_override;
    bool have_d = false, have_b = false;

    auto parse_list = [](const std::string& value) {
        std::vector<Rational> list;
        std::size_t from = 0;
        while (from <= value.size()) {
            std::size_t comma = value.find(',', from);
            std::string item = comma == std::string::npos ? value.substr(from)
                                                          : value.substr(from, comma - from);
            list.push_back(parse_rational(item));
            if (comma == std::string::npos) break;
            from = comma + 1;
        }
        return list;
    };

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = eol == std::string::npos ? text.substr(pos)
                                                    : text.substr(pos, eol - pos);
        ++line_no;
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfigError("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        }
        std::string key = line.substr(first, line.find_last_not_of(" \t\r", eq - 1) - first + 1);
        std::string value = line.substr(eq + 1);

        if (key == "traps") {
            Rational r = parse_rational(value);
            if (boost::multiprecision::denominator(r) != 1 || r < 1 || r > 100000) {
                throw InvalidConfigError("traps must be a small positive integer");
            }
            traps = static_cast<int>(boost::multiprecision::numerator(r));
            have_traps = true;
        } else if (key == "offset") {
            offset = parse_rational(value);
        } else if (key == "velocity") {
            velocity = parse_rational(value);
        } else if (key == "length") {
            length = parse_rational(value);
        } else if (key == "d") {
            d_override = parse_list(value);
            have_d = true;
        } else if (key == "b") {
            b_override = parse_list(value);
            have_b = true;
        } else {
            throw InvalidConfigError("config line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    if (!have_traps) throw InvalidConfigError("config is missing 'traps'");

    MousetrapConfig cfg = make_config(traps, offset, velocity, length);
    if (have_d) cfg.thread_distance = std::move(d_override);
    if (have_b) cfg.block_distance = std::move(b_override);
    return cfg;
}

inline std::string event_line(const MechEvent& ev) {
    std::string out = "time=" + rational_str(ev.time);
    switch (ev.kind) {
        case MechEvent::Kind::ThreadTorn:
            out += " kind=thread_torn trap=" + std::to_string(ev.trap);
            break;
        case MechEvent::Kind::BeamLatched:
            out += " kind=beam_latched trap=" + std::to_string(ev.trap);
            break;
        case MechEvent::Kind::BallBlocked:
            out += " kind=ball_blocked ball=" + std::to_string(ev.trap) +
                   " by_beam=" + std::to_string(ev.other);
            break;
        case MechEvent::Kind::BallStopped:
            out += " kind=ball_stopped ball=" + std::to_string(ev.trap);
            break;
    }
    return out;
}

inline std::string event_log(const std::vector<MechEvent>& events) {
    std::string out;
    for (const auto& ev : events) {
        out += event_line(ev);
        out += '\n';
    }
    return out;
}

inline const char* beam_name(BeamState s) {
    return s == BeamState::Latched ? "Latched" : "Vertical";
}

}  // namespace zeno
