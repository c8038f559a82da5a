// Lane diagrams of cascade runs: one row per machine, a tick for the start
// of every instruction plus one for the machine's exit. Tick columns are
// produced from the exact times with integer arithmetic, so two renders of
// the same run are byte-identical and ordering is never at the mercy of
// floating point.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/cascade.hpp"
#include "zeno/dyadic.hpp"

namespace zeno {

enum class DiagramFormat { Text, Svg };

struct DiagramOptions {
    DyadicTime t_max = DyadicTime(BigInt(3), 0);  // axis is clipped here
    int width = 72;                               // text columns of the bar
    CascadeOptions cascade;
};

struct LaneMark {
    int ordinal = 0;  // 1-based position within the lane; the exit is last
    DyadicTime time;
    std::string label;  // "t<machine>,<ordinal>"
};

struct DiagramLane {
    int machine = 0;
    std::vector<LaneMark> marks;
};

struct TimingDiagram {
    std::vector<DiagramLane> lanes;  // machines 1..k, empty ones included
    DyadicTime t_max;
    int width = 72;
};

inline TimingDiagram build_diagram(const Program& p, int machines,
                                   DiagramOptions opts = {}) {
    if (machines < 1) throw std::invalid_argument("need at least one lane");
    if (opts.width < 2) throw std::invalid_argument("bar width is too small");
    RunResult r = run(p, machines, opts.cascade);
    auto timelines = extract_timelines(r);

    TimingDiagram diagram;
    diagram.t_max = opts.t_max;
    diagram.width = opts.width;
    diagram.lanes.resize(static_cast<std::size_t>(machines));
    for (int m = 1; m <= machines; ++m) {
        diagram.lanes[static_cast<std::size_t>(m) - 1].machine = m;
    }
    for (const auto& tl : timelines) {
        DiagramLane& lane = diagram.lanes[static_cast<std::size_t>(tl.machine) - 1];
        int ordinal = 0;
        for (const auto& [instr, start] : tl.instruction_starts) {
            ++ordinal;
            lane.marks.push_back({ordinal, start,
                                  "t" + std::to_string(tl.machine) + "," +
                                      std::to_string(ordinal)});
        }
        ++ordinal;
        lane.marks.push_back({ordinal, tl.exit_time,
                              "t" + std::to_string(tl.machine) + "," +
                                  std::to_string(ordinal)});
    }
    return diagram;
}

namespace detail {

// Column of a tick on a bar of `width` cells covering [0, t_max]; exact.
inline int tick_column(const DyadicTime& t, const DyadicTime& t_max, int width) {
    BigInt num = t.numerator() * (width - 1);
    BigInt den = t_max.numerator();
    unsigned lift_n = t_max.exponent();
    unsigned lift_d = t.exponent();
    return static_cast<int>((num << lift_n) / (den << lift_d));
}

inline bool fits_axis(const DyadicTime& t, const DyadicTime& t_max) {
    return !(t_max < t);
}

// Fixed-point decimal with truncation; enough for layout, exactness is not
// needed here because geometry only has to be deterministic and monotone.
inline std::string svg_coord(const BigInt& num, const BigInt& den) {
    BigInt scaled = num * 10000 / den;
    std::string digits = scaled.str();
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(0, 1);
    while (digits.size() < 5) digits.insert(digits.begin(), '0');
    std::string out = digits.substr(0, digits.size() - 4) + "." +
                      digits.substr(digits.size() - 4);
    return neg ? "-" + out : out;
}

inline std::string svg_x(const DyadicTime& t, const DyadicTime& t_max,
                         int left, int span) {
    BigInt num = (t.numerator() << t_max.exponent()) * span +
                 (t_max.numerator() << t.exponent()) * left;
    BigInt den = t_max.numerator() << t.exponent();
    return svg_coord(num, den);
}

}  // namespace detail

inline std::string render_text(const TimingDiagram& d) {
    std::string out;
    for (const auto& lane : d.lanes) {
        out += "machine " + std::to_string(lane.machine) + ":";
        if (lane.marks.empty()) {
            out += " (no events)";
        } else {
            for (const auto& mark : lane.marks) {
                out += " " + mark.label + "=" + mark.time.canonical();
            }
        }
        out += '\n';
        std::string bar(static_cast<std::size_t>(d.width), '-');
        for (const auto& mark : lane.marks) {
            if (!detail::fits_axis(mark.time, d.t_max)) continue;
            bar[static_cast<std::size_t>(detail::tick_column(mark.time, d.t_max, d.width))] =
                '*';
        }
        out += "  |" + bar + "|\n";
    }
    out += "axis: 0/2^0 .. " + d.t_max.canonical() + " (" + std::to_string(d.width) +
           " cols)\n";
    return out;
}

inline std::string render_svg(const TimingDiagram& d) {
    const int left = 40, span = 640, top = 30, pitch = 40;
    int height = top + pitch * static_cast<int>(d.lanes.size()) + 30;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(left * 2 + span) + "\" height=\"" + std::to_string(height) +
           "\">\n";
    out += "  <title>instruction start times</title>\n";
    for (std::size_t i = 0; i < d.lanes.size(); ++i) {
        const DiagramLane& lane = d.lanes[i];
        int y = top + pitch * static_cast<int>(i) + pitch / 2;
        out += "  <text x=\"4\" y=\"" + std::to_string(y + 4) + "\" font-size=\"11\">M" +
               std::to_string(lane.machine) + "</text>\n";
        out += "  <line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(y) +
               "\" x2=\"" + std::to_string(left + span) + "\" y2=\"" + std::to_string(y) +
               "\" stroke=\"#999\"/>\n";
        for (const auto& mark : lane.marks) {
            if (!detail::fits_axis(mark.time, d.t_max)) continue;
            std::string x = detail::svg_x(mark.time, d.t_max, left, span);
            out += "  <line x1=\"" + x + "\" y1=\"" + std::to_string(y - 6) + "\" x2=\"" +
                   x + "\" y2=\"" + std::to_string(y + 6) + "\" stroke=\"#000\"/>\n";
            out += "  <text x=\"" + x + "\" y=\"" + std::to_string(y - 9) +
                   "\" font-size=\"9\" text-anchor=\"middle\">" + mark.label + "=" +
                   mark.time.canonical() + "</text>\n";
        }
    }
    int axis_y = height - 18;
    out += "  <line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(axis_y) +
           "\" x2=\"" + std::to_string(left + span) + "\" y2=\"" + std::to_string(axis_y) +
           "\" stroke=\"#000\"/>\n";
    out += "  <text x=\"" + std::to_string(left) + "\" y=\"" + std::to_string(axis_y + 12) +
           "\" font-size=\"10\">0/2^0</text>\n";
    out += "  <text x=\"" + std::to_string(left + span) + "\" y=\"" +
           std::to_string(axis_y + 12) + "\" font-size=\"10\" text-anchor=\"end\">" +
           d.t_max.canonical() + "</text>\n";
    out += "</svg>\n";
    return out;
}

inline std::string render(const TimingDiagram& d, DiagramFormat format) {
    return format == DiagramFormat::Svg ? render_svg(d) : render_text(d);
}

}  // namespace zeno
