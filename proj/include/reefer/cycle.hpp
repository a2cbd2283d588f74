#pragma once

// Drive cycles: CSV ingestion, synthetic stop-go/cruise traces, uniform
// resampling and composition of a working day out of repeated cycles.

#include "reefer/error.hpp"
#include "reefer/format.hpp"
#include "reefer/powertrain.hpp"
#include "reefer/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace reefer {

struct CyclePoint {
    double time_s = 0.0;
    double speed_mps = 0.0;
    double grade_pct = 0.0;

    bool operator==(const CyclePoint&) const = default;
};

struct BreakWindow {
    double start_s = 0.0;
    double duration_s = 0.0;

    bool operator==(const BreakWindow&) const = default;
};

struct DriveCycle {
    std::vector<CyclePoint> points;
    double dt_s = 0.0;  // 0 until the cycle is on a uniform grid
    std::string name;
    std::vector<BreakWindow> breaks;

    bool uniform() const { return dt_s > 0; }
    std::size_t size() const { return points.size(); }
    /// Each sample of a uniform cycle covers one interval of dt_s.
    double duration_s() const { return static_cast<double>(points.size()) * dt_s; }
    double span_s() const { return points.empty() ? 0.0 : points.back().time_s - points.front().time_s; }

    /// True when sample i lies inside an annotated break.
    bool in_break(std::size_t i) const {
        const double t = points[i].time_s;
        return std::any_of(breaks.begin(), breaks.end(), [&](const BreakWindow& b) {
            return t >= b.start_s - 1e-9 && t < b.start_s + b.duration_s - 1e-9;
        });
    }

    bool operator==(const DriveCycle&) const = default;
};

struct CycleStats {
    double distance_km = 0.0;
    double mean_moving_speed_kmh = 0.0;
    std::size_t stop_count = 0;
    double braking_energy_fraction = 0.0;
};

enum class Profile { urban, regional, longhaul };

inline Profile parse_profile(std::string_view s) {
    if (s == "urban") return Profile::urban;
    if (s == "regional") return Profile::regional;
    if (s == "longhaul") return Profile::longhaul;
    throw InvalidArgument("unknown profile '" + std::string(s) + "'");
}

inline std::string to_string(Profile p) {
    switch (p) {
    case Profile::urban: return "urban";
    case Profile::regional: return "regional";
    case Profile::longhaul: return "longhaul";
    }
    return "?";
}

namespace detail {

inline double parse_number(std::string_view field, std::size_t line) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
        throw ParseError("not a number: '" + std::string(field) + "'", line);
    return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        auto l = text.substr(start, pos - start);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        out.push_back(l);
        start = pos + 1;
    }
    return out;
}

/// Sampling interval when every gap equals the first, else 0.
inline double detect_dt(const std::vector<CyclePoint>& pts) {
    if (pts.size() < 2) return 0.0;
    const double dt = pts[1].time_s - pts[0].time_s;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (std::abs(pts[i].time_s - pts[i - 1].time_s - dt) > 1e-9 * std::max(1.0, dt)) return 0.0;
    }
    return dt;
}

} // namespace detail

/// Parses `time_s,speed_mps,grade_pct` CSV text.
inline DriveCycle load_cycle(std::string_view csv_text, std::string name) {
    const auto rows = detail::lines(csv_text);
    if (rows.empty() || rows[0] != "time_s,speed_mps,grade_pct")
        throw ParseError("expected header 'time_s,speed_mps,grade_pct'", 1);
    DriveCycle c;
    c.name = std::move(name);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::size_t line = i + 1;
        if (rows[i].empty()) continue;
        const auto fields = detail::split(rows[i], ',');
        if (fields.size() != 3) throw ParseError("expected 3 fields", line);
        CyclePoint p{detail::parse_number(fields[0], line), detail::parse_number(fields[1], line),
                     detail::parse_number(fields[2], line)};
        if (p.speed_mps < 0) throw ParseError("negative speed", line);
        if (std::abs(p.grade_pct) > 25) throw ParseError("grade beyond 25%", line);
        if (!c.points.empty() && !(p.time_s > c.points.back().time_s)) throw ParseError("time not increasing", line);
        c.points.push_back(p);
    }
    if (c.points.size() < 2) throw ParseError("cycle needs at least 2 rows");
    c.dt_s = detail::detect_dt(c.points);
    return c;
}

/// Linear interpolation of speed and grade onto a uniform grid starting at the
/// first sample time.
inline DriveCycle resample(const DriveCycle& cycle, double dt_s) {
    if (!(dt_s > 0)) throw InvalidArgument("resample: dt must be positive");
    if (cycle.points.empty()) throw InvalidArgument("resample: empty cycle");
    const auto& src = cycle.points;
    const double t0 = src.front().time_s;
    const auto n = static_cast<std::size_t>(std::floor(cycle.span_s() / dt_s + 1e-9)) + 1;

    DriveCycle out;
    out.name = cycle.name;
    out.dt_s = dt_s;
    out.breaks = cycle.breaks;
    out.points.reserve(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt_s;
        while (j + 1 < src.size() && src[j + 1].time_s <= t + 1e-9) ++j;
        if (j + 1 >= src.size() || std::abs(src[j].time_s - t) <= 1e-9) {
            out.points.push_back({t, src[j].speed_mps, src[j].grade_pct});
            continue;
        }
        const double w = (t - src[j].time_s) / (src[j + 1].time_s - src[j].time_s);
        out.points.push_back({t, src[j].speed_mps + w * (src[j + 1].speed_mps - src[j].speed_mps),
                              src[j].grade_pct + w * (src[j + 1].grade_pct - src[j].grade_pct)});
    }
    return out;
}

/// Repeats a standstill-to-standstill cycle with parked breaks in between.
inline DriveCycle compose_mission(const DriveCycle& cycle, int repeats, double break_s) {
    if (repeats < 1) throw InvalidArgument("compose_mission: repeats must be >= 1");
    if (!cycle.uniform()) throw InvalidArgument("compose_mission: cycle must be uniformly sampled");
    if (break_s < 0) throw InvalidArgument("compose_mission: negative break");
    if (cycle.points.empty() || cycle.points.front().speed_mps != 0.0 || cycle.points.back().speed_mps != 0.0)
        throw InvalidArgument("compose_mission: cycle must start and end at standstill");
    if (repeats == 1) return cycle;

    const double dt = cycle.dt_s;
    const auto break_steps = static_cast<std::size_t>(std::llround(break_s / dt));
    DriveCycle out;
    out.name = cycle.name;
    out.dt_s = dt;
    out.points.reserve(cycle.size() * static_cast<std::size_t>(repeats) + break_steps * (repeats - 1));
    auto push = [&](double v, double grade) {
        out.points.push_back({static_cast<double>(out.points.size()) * dt, v, grade});
    };
    for (int r = 0; r < repeats; ++r) {
        if (r > 0) {
            out.breaks.push_back({static_cast<double>(out.points.size()) * dt, static_cast<double>(break_steps) * dt});
            for (std::size_t k = 0; k < break_steps; ++k) push(0.0, 0.0);
        }
        for (const auto& p : cycle.points) push(p.speed_mps, p.grade_pct);
    }
    return out;
}

/// Summary statistics of a uniform cycle. Braking fraction uses the traction
/// forces implied by `vp`.
inline CycleStats cycle_stats(const DriveCycle& cycle, const VehicleParams& vp) {
    if (!cycle.uniform()) throw InvalidArgument("cycle_stats: cycle must be uniformly sampled");
    CycleStats s;
    const auto& pts = cycle.points;
    const double dt = cycle.dt_s;
    double dist = 0.0, moving_time = 0.0, pos_work = 0.0, neg_work = 0.0;
    std::size_t run = 0;
    auto close_run = [&] {
        if (static_cast<double>(run) * dt >= 5.0 - 1e-9) ++s.stop_count;
        run = 0;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = pts[i].speed_mps;
        dist += v * dt;
        if (v > 0) {
            moving_time += dt;
            close_run();
        } else if (cycle.in_break(i)) {
            close_run();
        } else {
            ++run;
        }
        const double v_next = i + 1 < pts.size() ? pts[i + 1].speed_mps : v;
        const double f = traction_force(v, (v_next - v) / dt, pts[i].grade_pct, vp);
        const double work = f * v * dt;
        if (work > 0) pos_work += work;
        else neg_work -= work;
    }
    close_run();
    s.distance_km = dist / 1000.0;
    s.mean_moving_speed_kmh = moving_time > 0 ? dist / moving_time * 3.6 : 0.0;
    s.braking_energy_fraction = pos_work > 0 ? std::min(1.0, neg_work / pos_work) : 0.0;
    return s;
}

namespace detail {

struct ProfileShape {
    double v_lo, v_hi;          // cruise target band, m/s
    double leg_lo, leg_hi;      // distance between stops, m
    double dwell_lo, dwell_hi;  // stop duration, s
    double acc_lo, acc_hi;      // m/s^2
    double dec_lo, dec_hi;      // m/s^2
    double retarget_s;          // mean time between target speed changes while cruising
    double grade_amp;           // percent
};

inline ProfileShape shape_of(Profile p) {
    switch (p) {
    case Profile::urban:
        return {40 / 3.6, 60 / 3.6, 300, 800, 8, 40, 0.30, 0.50, 0.50, 0.90, 1e9, 1.0};
    case Profile::regional:
        return {50 / 3.6, 80 / 3.6, 2500, 8000, 10, 60, 0.25, 0.40, 0.40, 0.70, 240, 0.8};
    case Profile::longhaul:
        return {80.5 / 3.6, 84.5 / 3.6, 1e12, 1e12, 0, 0, 0.25, 0.35, 0.35, 0.50, 400, 0.6};
    }
    return {};
}

} // namespace detail

/// Deterministic synthetic drive cycle at 1 s resolution, starting and ending
/// at standstill.
///
/// urban: stop-go trapezoids peaking at 40-60 km/h with a stop every 300-800 m.
/// regional: 50-80 km/h stretches with a stop every few kilometers.
/// longhaul: cruising at 80-85 km/h.
/// Grade is a smooth sum of sinusoids with a profile-specific amplitude.
inline DriveCycle synthesize_cycle(Profile profile, double duration_s, std::uint64_t seed) {
    if (duration_s < 600) throw InvalidArgument("synthesize_cycle: duration must be >= 600 s");
    const auto shape = detail::shape_of(profile);
    Rng rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(profile) + 1);
    const auto n = static_cast<std::size_t>(std::floor(duration_s + 1e-9));
    const double dt = 1.0;

    enum class Phase { drive, brake, dwell };
    Phase phase = Phase::dwell;
    double v = 0.0, target = 0.0, leg_left = 0.0, dwell_left = 2.0;
    double acc = shape.acc_lo, dec = shape.dec_lo, retarget_in = 0.0;

    auto new_leg = [&] {
        target = rng.uniform(shape.v_lo, shape.v_hi);
        leg_left = rng.uniform(shape.leg_lo, shape.leg_hi);
        acc = rng.uniform(shape.acc_lo, shape.acc_hi);
        dec = rng.uniform(shape.dec_lo, shape.dec_hi);
        retarget_in = rng.uniform(0.5, 1.5) * shape.retarget_s;
    };

    DriveCycle c;
    c.name = to_string(profile);
    c.dt_s = dt;
    c.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.points.push_back({static_cast<double>(i) * dt, v, 0.0});
        const double steps_left = static_cast<double>(n - 1 - i);
        // Stop in time for the end of the cycle.
        const bool must_stop = phase == Phase::drive && v / dec + 3.0 >= steps_left;
        switch (phase) {
        case Phase::dwell:
            dwell_left -= dt;
            if (dwell_left <= 0 && steps_left > 60) {
                new_leg();
                phase = Phase::drive;
            }
            break;
        case Phase::drive: {
            if (must_stop || leg_left <= v * v / (2.0 * dec) + v * dt) {
                phase = Phase::brake;
                break;
            }
            retarget_in -= dt;
            if (retarget_in <= 0) {
                target = rng.uniform(shape.v_lo, shape.v_hi);
                retarget_in = rng.uniform(0.5, 1.5) * shape.retarget_s;
            }
            if (v < target) v = std::min(target, v + acc * dt);
            else v = std::max(target, v - 0.5 * dec * dt);
            break;
        }
        case Phase::brake:
            v = std::max(0.0, v - dec * dt);
            if (v == 0.0) {
                phase = Phase::dwell;
                dwell_left = rng.uniform(shape.dwell_lo, shape.dwell_hi);
            }
            break;
        }
        if (phase == Phase::drive || phase == Phase::brake) leg_left -= v * dt;
    }
    c.points.back().speed_mps = 0.0;

    // Smooth grade: three sinusoids, periods 200-900 s, normalized amplitude.
    double period[3], phase0[3], weight[3], wsum = 0.0;
    for (int k = 0; k < 3; ++k) {
        period[k] = rng.uniform(200.0, 900.0);
        phase0[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        weight[k] = rng.uniform(0.5, 1.0);
        wsum += weight[k];
    }
    for (auto& p : c.points) {
        double g = 0.0;
        for (int k = 0; k < 3; ++k) g += weight[k] * std::sin(2.0 * std::numbers::pi * p.time_s / period[k] + phase0[k]);
        p.grade_pct = shape.grade_amp * g / wsum;
    }
    return c;
}

/// Writes a cycle in the `time_s,speed_mps,grade_pct` CSV layout.
inline std::string cycle_to_csv(const DriveCycle& cycle) {
    std::string out = "time_s,speed_mps,grade_pct\n";
    for (const auto& p : cycle.points) {
        out += format_exact(p.time_s);
        out += ',';
        out += format_exact(p.speed_mps);
        out += ',';
        out += format_exact(p.grade_pct);
        out += '\n';
    }
    return out;
}

} // namespace reefer
