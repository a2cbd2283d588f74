#pragma once

// SVG 1.1 charts: SoC-over-time curves per strategy and the bang-bang
// threshold heatmap.

#include "reefer/error.hpp"
#include "reefer/format.hpp"
#include "reefer/harness.hpp"
#include "reefer/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace reefer {

struct LabeledTrace {
    std::string label;
    const SimTrace* trace = nullptr;
};

namespace svg {

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string num(double x) { return format_fixed(x, 2); }

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#d62728", "#ff7f0e", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};
    return colors[i % 6];
}

inline std::string header(int w, int h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + ' ' +
           std::to_string(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

inline std::string text(double x, double y, std::string_view s, std::string_view anchor = "start") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
           escape(s) + "</text>\n";
}

inline std::string line(double x1, double y1, double x2, double y2, std::string_view attrs) {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" " +
           std::string(attrs) + "/>\n";
}

/// Linear blend across a three-stop scale (green, yellow, red) for t in [0, 1].
inline std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double stops[3][3] = {{26, 150, 65}, {255, 255, 191}, {215, 25, 28}};
    const int seg = t < 0.5 ? 0 : 1;
    const double u = t < 0.5 ? t * 2.0 : (t - 0.5) * 2.0;
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[seg][c] + u * (stops[seg + 1][c] - stops[seg][c])));
    static const char hex[] = "0123456789abcdef";
    buf[0] = '#';
    for (int c = 0; c < 3; ++c) {
        buf[1 + 2 * c] = hex[rgb[c] >> 4];
        buf[2 + 2 * c] = hex[rgb[c] & 15];
    }
    buf[7] = '\0';
    return buf;
}

} // namespace svg

/// SoC (%) over time (h), one polyline per trace, with the battery floor marked.
/// Long traces are thinned to at most ~2000 vertices each.
inline std::string render_soc_plot(const std::vector<LabeledTrace>& traces, double soc_floor = 0.20) {
    if (traces.empty()) throw InvalidArgument("render_soc_plot: no traces");
    double t_max = 0.0;
    for (const auto& lt : traces) {
        if (!lt.trace || lt.trace->empty()) throw InvalidArgument("render_soc_plot: empty trace '" + lt.label + "'");
        t_max = std::max(t_max, lt.trace->back().t_s);
    }
    const double hours = std::max(t_max / 3600.0, 1e-6);
    constexpr int W = 800, H = 450;
    constexpr double L = 60, R = 170, T = 30, B = 50;
    const double pw = W - L - R, ph = H - T - B;
    auto x_of = [&](double t_s) { return L + t_s / 3600.0 / hours * pw; };
    auto y_of = [&](double soc) { return T + (1.0 - soc) * ph; };

    std::string out = svg::header(W, H);
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(W) + "\" height=\"" + std::to_string(H) +
           "\" fill=\"#ffffff\"/>\n";
    for (int pct = 0; pct <= 100; pct += 20) {
        const double y = y_of(pct / 100.0);
        out += svg::line(L, y, L + pw, y, "stroke=\"#dddddd\" stroke-width=\"1\"");
        out += svg::text(L - 6, y + 4, std::to_string(pct), "end");
    }
    const double tick = hours > 6 ? 2.0 : (hours > 2 ? 1.0 : 0.5);
    for (double h = 0; h <= hours + 1e-9; h += tick) {
        const double x = L + h / hours * pw;
        out += svg::line(x, T + ph, x, T + ph + 5, "stroke=\"#000000\"");
        out += svg::text(x, T + ph + 18, format_fixed(h, tick < 1 ? 1 : 0), "middle");
    }
    out += "<rect x=\"" + svg::num(L) + "\" y=\"" + svg::num(T) + "\" width=\"" + svg::num(pw) + "\" height=\"" +
           svg::num(ph) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
    out += svg::text(L + pw / 2, H - 10, "time [h]", "middle");
    out += "<text x=\"16\" y=\"" + svg::num(T + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           svg::num(T + ph / 2) + ")\">SoC [%]</text>\n";
    out += "<line class=\"floor\" x1=\"" + svg::num(L) + "\" y1=\"" + svg::num(y_of(soc_floor)) + "\" x2=\"" +
           svg::num(L + pw) + "\" y2=\"" + svg::num(y_of(soc_floor)) +
           "\" stroke=\"#000000\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";

    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& tr = *traces[i].trace;
        const std::size_t stride = std::max<std::size_t>(1, (tr.size() + 1999) / 2000);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(svg::palette(i)) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < tr.size(); k += stride) {
            out += svg::num(x_of(tr[k].t_s)) + ',' + svg::num(y_of(tr[k].soc_after)) + ' ';
        }
        out += svg::num(x_of(tr.back().t_s)) + ',' + svg::num(y_of(tr.back().soc_after));
        out += "\"/>\n";
        const double ly = T + 10 + 20.0 * static_cast<double>(i);
        out += svg::line(L + pw + 12, ly, L + pw + 36, ly,
                         "stroke=\"" + std::string(svg::palette(i)) + "\" stroke-width=\"3\"");
        out += svg::text(L + pw + 42, ly + 4, traces[i].label);
    }
    out += "</svg>\n";
    return out;
}

/// Lower x upper grid of bang-bang thresholds colored by extra fuel.
/// Infeasible cells are white with a cross; the best cell is outlined.
inline std::string render_sweep_heatmap(const SweepReport& report) {
    if (report.grid.empty()) throw InvalidArgument("render_sweep_heatmap: empty grid");
    std::vector<double> lowers, uppers;
    for (const auto& c : report.grid) {
        lowers.push_back(c.lower);
        uppers.push_back(c.upper);
    }
    std::sort(lowers.begin(), lowers.end());
    lowers.erase(std::unique(lowers.begin(), lowers.end()), lowers.end());
    std::sort(uppers.begin(), uppers.end());
    uppers.erase(std::unique(uppers.begin(), uppers.end()), uppers.end());
    double f_lo = std::numeric_limits<double>::infinity(), f_hi = -f_lo;
    for (const auto& c : report.grid) {
        if (!c.feasible) continue;
        f_lo = std::min(f_lo, c.extra_fuel_L);
        f_hi = std::max(f_hi, c.extra_fuel_L);
    }

    constexpr double cell = 28, L = 70, T = 40;
    const double pw = cell * static_cast<double>(lowers.size());
    const double ph = cell * static_cast<double>(uppers.size());
    const int W = static_cast<int>(L + pw + 150), H = static_cast<int>(T + ph + 60);
    auto col = [&](double v) {
        return static_cast<double>(std::lower_bound(lowers.begin(), lowers.end(), v) - lowers.begin());
    };
    auto row = [&](double v) {
        return static_cast<double>(uppers.end() - std::lower_bound(uppers.begin(), uppers.end(), v) - 1);
    };

    std::string out = svg::header(W, H);
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(W) + "\" height=\"" + std::to_string(H) +
           "\" fill=\"#ffffff\"/>\n";
    out += svg::text(L + pw / 2, 20, "extra fuel [L] - " + report.cycle_name, "middle");
    for (const auto& c : report.grid) {
        const double x = L + col(c.lower) * cell, y = T + row(c.upper) * cell;
        const std::string pos = "x=\"" + svg::num(x) + "\" y=\"" + svg::num(y) + "\" width=\"" + svg::num(cell) +
                                "\" height=\"" + svg::num(cell) + "\"";
        if (c.feasible) {
            const double t = f_hi > f_lo ? (c.extra_fuel_L - f_lo) / (f_hi - f_lo) : 0.0;
            out += "<rect class=\"cell\" " + pos + " fill=\"" + svg::heat_color(t) + "\" stroke=\"#ffffff\"><title>" +
                   format_fixed(c.lower * 100, 0) + "% / " + format_fixed(c.upper * 100, 0) + "%: " +
                   format_sig6(c.extra_fuel_L) + " L</title></rect>\n";
        } else {
            out += "<rect class=\"cell infeasible\" " + pos + " fill=\"#ffffff\" stroke=\"#bbbbbb\"/>\n";
            out += "<path class=\"infeasible-mark\" d=\"M" + svg::num(x + 6) + ',' + svg::num(y + 6) + " L" +
                   svg::num(x + cell - 6) + ',' + svg::num(y + cell - 6) + " M" + svg::num(x + cell - 6) + ',' +
                   svg::num(y + 6) + " L" + svg::num(x + 6) + ',' + svg::num(y + cell - 6) +
                   "\" stroke=\"#888888\" stroke-width=\"1.5\"/>\n";
        }
    }
    if (report.best) {
        out += "<rect class=\"best\" x=\"" + svg::num(L + col(report.best->lower) * cell) + "\" y=\"" +
               svg::num(T + row(report.best->upper) * cell) + "\" width=\"" + svg::num(cell) + "\" height=\"" +
               svg::num(cell) + "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"3\"/>\n";
    }
    for (std::size_t i = 0; i < lowers.size(); ++i)
        out += svg::text(L + (static_cast<double>(i) + 0.5) * cell, T + ph + 16, format_fixed(lowers[i] * 100, 0), "middle");
    for (std::size_t j = 0; j < uppers.size(); ++j)
        out += svg::text(L - 6, T + row(uppers[j]) * cell + cell / 2 + 4, format_fixed(uppers[j] * 100, 0), "end");
    out += svg::text(L + pw / 2, T + ph + 40, "lower SoC bound [%]", "middle");
    out += "<text x=\"18\" y=\"" + svg::num(T + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           svg::num(T + ph / 2) + ")\">upper SoC bound [%]</text>\n";
    if (std::isfinite(f_lo)) {
        out += svg::text(L + pw + 20, T + 14, "min " + format_sig6(f_lo) + " L");
        out += svg::text(L + pw + 20, T + 32, "max " + format_sig6(f_hi) + " L");
    }
    out += svg::text(L + pw + 20, T + 50, "x = infeasible");
    out += "</svg>\n";
    return out;
}

} // namespace reefer
