#pragma once

// Coupled truck + trailer simulation over a mission.
//
// Per step the speed trace fixes the wheel force. Braking steps feed the
// generator axle (recuperation); traction steps may additionally carry the
// generator's towing force, paid for with marginal diesel. The TRU draws its
// load on every step, parked or not.

#include "reefer/cycle.hpp"
#include "reefer/error.hpp"
#include "reefer/format.hpp"
#include "reefer/policy.hpp"
#include "reefer/powertrain.hpp"
#include "reefer/trailer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reefer {

struct TowingSchedule {
    std::vector<bool> active;

    TowingSchedule() = default;
    explicit TowingSchedule(std::size_t steps, bool value = false) : active(steps, value) {}

    std::size_t size() const { return active.size(); }
    std::size_t count() const { return static_cast<std::size_t>(std::count(active.begin(), active.end(), true)); }
    bool operator==(const TowingSchedule&) const = default;
};

struct StepRecord {
    double t_s = 0.0;
    double v_mps = 0.0;
    double f_req_n = 0.0;
    bool towing = false;
    bool recup = false;
    double p_tow_elec_w = 0.0;
    double p_recup_elec_w = 0.0;
    double fuel_L = 0.0;
    double fuel_extra_L = 0.0;
    double soc_after = 0.0;
    double soc_shortfall = 0.0;  // unserved load when the battery ran empty
};

using SimTrace = std::vector<StepRecord>;

inline constexpr std::size_t no_step = std::numeric_limits<std::size_t>::max();

struct StrategyResult {
    double total_fuel_L = 0.0;
    double extra_fuel_L = 0.0;
    double towing_energy_kwh = 0.0;
    double recup_energy_kwh = 0.0;
    double min_soc = 0.0;
    double final_soc = 0.0;
    bool feasible = false;
    bool depleted = false;
    std::size_t demoted_steps = 0;    // scheduled tows that were not admissible
    std::size_t saturated_steps = 0;  // base demand clipped to the engine envelope
    std::size_t towing_steps = 0;
    std::size_t first_violation = no_step;  // first step ending below the floor

    bool operator==(const StrategyResult&) const = default;
};

/// Per-step quantities that do not depend on the battery state.
struct StepContext {
    double t_s = 0.0;
    double v_mps = 0.0;
    double f_req_n = 0.0;
    double base_fuel_Lps = 0.0;
    bool saturated = false;
    bool tow_ok = false;           // moving, traction side, engine headroom for the full tow force
    double tow_force_n = 0.0;      // full generator force at this speed
    double tow_extra_Lps = 0.0;    // marginal fuel of the full tow force
};

/// A mission prepared for repeated simulation.
class MissionModel {
public:
    MissionModel(const DriveCycle& mission, VehicleParams vp, TrailerParams tp)
        : vp_(std::move(vp)), tp_(std::move(tp)), dt_(mission.dt_s) {
        if (!mission.uniform()) throw InvalidArgument("simulate: mission must be uniformly sampled");
        if (mission.points.empty()) throw InvalidArgument("simulate: empty mission");
        vp_.validate();
        tp_.validate();
        const auto& pts = mission.points;
        steps_.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            StepContext s;
            s.t_s = pts[i].time_s;
            s.v_mps = pts[i].speed_mps;
            const double v_next = i + 1 < pts.size() ? pts[i + 1].speed_mps : s.v_mps;
            s.f_req_n = traction_force(s.v_mps, (v_next - s.v_mps) / dt_, pts[i].grade_pct, vp_);
            const auto base = base_fuel(s.f_req_n, s.v_mps, vp_);
            s.base_fuel_Lps = base.rate_Lps;
            s.saturated = base.saturated;
            if (s.v_mps > 0 && s.f_req_n >= 0 && !base.saturated && !mission.in_break(i)) {
                s.tow_force_n = towing_force_max(s.v_mps, tp_);
                try {
                    s.tow_extra_Lps = marginal_towing_fuel(s.f_req_n, s.tow_force_n, s.v_mps, vp_);
                    s.tow_ok = true;
                } catch (const TowingUnavailable&) {
                    s.tow_ok = false;
                }
            }
            steps_.push_back(s);
        }
    }

    const VehicleParams& vehicle() const { return vp_; }
    const TrailerParams& trailer() const { return tp_; }
    double dt_s() const { return dt_; }
    std::size_t size() const { return steps_.size(); }
    const StepContext& operator[](std::size_t k) const { return steps_[k]; }
    const std::vector<StepContext>& steps() const { return steps_; }

    bool admissible(std::size_t k, double soc) const { return steps_[k].tow_ok && soc < tp_.batt.soc_cap; }

private:
    VehicleParams vp_;
    TrailerParams tp_;
    double dt_;
    std::vector<StepContext> steps_;
};

struct StepOutcome {
    bool towing = false;
    bool recup = false;
    double p_tow_elec_w = 0.0;
    double p_recup_elec_w = 0.0;
    double fuel_L = 0.0;
    double fuel_extra_L = 0.0;
    double soc_after = 0.0;
    bool depleted = false;
    double soc_shortfall = 0.0;
};

/// Advances one step from `soc`. Towing happens only if requested and admissible.
inline StepOutcome advance(const MissionModel& m, std::size_t k, double soc, bool tow) {
    const auto& s = m[k];
    const auto& tp = m.trailer();
    const double dt = m.dt_s();
    StepOutcome out;
    double p_charge = 0.0;
    double extra_Lps = 0.0;
    if (s.f_req_n < 0 && s.v_mps > 0) {
        const auto rec = recuperation_power(s.f_req_n, s.v_mps, {soc}, tp, dt);
        out.recup = rec.p_mech_w > 0;
        out.p_recup_elec_w = rec.p_elec_w;
        p_charge = rec.p_elec_w;
    } else if (tow && m.admissible(k, soc)) {
        const double full_mech = s.tow_force_n * s.v_mps;
        const double mech = std::min(full_mech, charge_headroom_mech_w(soc, tp, dt));
        extra_Lps = mech < full_mech ? marginal_towing_fuel(s.f_req_n, mech / s.v_mps, s.v_mps, m.vehicle())
                                     : s.tow_extra_Lps;
        out.towing = true;
        out.p_tow_elec_w = tp.eta_gen * mech;
        p_charge = out.p_tow_elec_w;
    }
    out.fuel_extra_L = extra_Lps * dt;
    out.fuel_L = s.base_fuel_Lps * dt + out.fuel_extra_L;
    const auto next = battery_step({soc}, p_charge, tp.p_tru_w, dt, tp.batt);
    out.soc_after = next.state.soc;
    out.depleted = next.depleted;
    out.soc_shortfall = next.shortfall;
    return out;
}

/// Either a fixed per-step schedule or a reactive controller.
using Control = std::variant<TowingSchedule, ReactivePolicy>;

struct Simulation {
    SimTrace trace;
    StrategyResult result;
};

/// Runs the mission. With `keep_trace == false` only aggregates are produced.
inline Simulation simulate(const MissionModel& m, const Control& control, bool keep_trace = true) {
    const auto& tp = m.trailer();
    const std::size_t n = m.size();
    const auto* schedule = std::get_if<TowingSchedule>(&control);
    std::optional<ReactivePolicy> policy;
    if (schedule) {
        if (schedule->size() != n) throw InvalidArgument("simulate: schedule length does not match mission");
    } else {
        policy = std::get<ReactivePolicy>(control);
        if (policy->kind == ReactivePolicy::Kind::bangbang &&
            !(tp.batt.soc_floor <= policy->lower_soc && policy->lower_soc < policy->upper_soc &&
              policy->upper_soc <= tp.batt.soc_cap))
            throw InvalidArgument("simulate: bang-bang thresholds must satisfy floor <= lower < upper <= cap");
    }

    Simulation sim;
    if (keep_trace) sim.trace.reserve(n);
    auto& r = sim.result;
    double soc = tp.batt.soc_init;
    r.min_soc = soc;
    double tow_j = 0.0, recup_j = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& s = m[k];
        const bool admissible = m.admissible(k, soc);
        bool tow = false;
        if (schedule) {
            tow = schedule->active[k];
            if (tow && !admissible) {
                ++r.demoted_steps;
                tow = false;
            }
        } else {
            tow = policy_step(*policy, soc, s.v_mps > 0, admissible);
        }
        const auto out = advance(m, k, soc, tow);
        soc = out.soc_after;
        r.total_fuel_L += out.fuel_L;
        r.extra_fuel_L += out.fuel_extra_L;
        tow_j += out.p_tow_elec_w * m.dt_s();
        recup_j += out.p_recup_elec_w * m.dt_s();
        r.towing_steps += out.towing ? 1 : 0;
        r.saturated_steps += s.saturated ? 1 : 0;
        r.depleted = r.depleted || out.depleted;
        r.min_soc = std::min(r.min_soc, soc);
        if (soc < tp.batt.soc_floor && r.first_violation == no_step) r.first_violation = k;
        if (keep_trace) {
            sim.trace.push_back({s.t_s, s.v_mps, s.f_req_n, out.towing, out.recup, out.p_tow_elec_w,
                                 out.p_recup_elec_w, out.fuel_L, out.fuel_extra_L, soc, out.soc_shortfall});
        }
    }
    r.final_soc = soc;
    r.towing_energy_kwh = tow_j / 3.6e6;
    r.recup_energy_kwh = recup_j / 3.6e6;
    r.feasible = r.min_soc >= tp.batt.soc_floor;
    return sim;
}

inline Simulation simulate(const DriveCycle& mission, const VehicleParams& vp, const TrailerParams& tp,
                           const Control& control) {
    return simulate(MissionModel(mission, vp, tp), control);
}

/// Relative mismatch between the SoC change of a trace and the energy that
/// entered and left the battery, counting load the empty battery could not serve.
inline double energy_balance_error(const SimTrace& trace, const TrailerParams& tp, double dt_s) {
    if (trace.empty()) return 0.0;
    const auto& b = tp.batt;
    double delta = 0.0, scale = 0.0, shortfall = 0.0;
    for (const auto& r : trace) {
        shortfall += r.soc_shortfall;
        const double in = (r.p_tow_elec_w + r.p_recup_elec_w) * b.eta_charge * dt_s;
        const double out = tp.p_tru_w / b.eta_discharge * dt_s;
        delta += in - out;
        scale += in + out;
    }
    const double expected = delta / b.capacity_j() + shortfall;
    const double actual = trace.back().soc_after - b.soc_init;
    return std::abs(actual - expected) / std::max(scale / b.capacity_j(), 1e-300);
}

/// Towing-attributable fuel of a run.
inline double extra_fuel(const StrategyResult& result) { return result.extra_fuel_L; }

/// The schedule a trace actually realized (demoted tows cleared).
inline TowingSchedule realized_schedule(const SimTrace& trace) {
    TowingSchedule s(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) s.active[k] = trace[k].towing;
    return s;
}

inline std::string trace_to_csv(const SimTrace& trace) {
    std::string out = "t_s,v_mps,f_req_n,towing,recup,fuel_L,fuel_extra_L,soc\n";
    for (const auto& r : trace) {
        out += format_sig6(r.t_s) + ',' + format_sig6(r.v_mps) + ',' + format_sig6(r.f_req_n) + ',' +
               (r.towing ? '1' : '0') + ',' + (r.recup ? '1' : '0') + ',' + format_sig6(r.fuel_L) + ',' +
               format_sig6(r.fuel_extra_L) + ',' + format_sig6(r.soc_after) + '\n';
    }
    return out;
}

inline std::string schedule_to_csv(const TowingSchedule& s) {
    std::string out = "step,active\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += std::to_string(k);
        out += s.active[k] ? ",1\n" : ",0\n";
    }
    return out;
}

inline TowingSchedule load_schedule(std::string_view csv_text) {
    const auto rows = detail::lines(csv_text);
    if (rows.empty() || rows[0] != "step,active") throw ParseError("expected header 'step,active'", 1);
    TowingSchedule s;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].empty()) continue;
        const auto fields = detail::split(rows[i], ',');
        if (fields.size() != 2) throw ParseError("expected 2 fields", i + 1);
        const double step = detail::parse_number(fields[0], i + 1);
        if (step != static_cast<double>(s.active.size())) throw ParseError("steps must be 0, 1, 2, ...", i + 1);
        if (fields[1] == "1") s.active.push_back(true);
        else if (fields[1] == "0") s.active.push_back(false);
        else throw ParseError("active must be 0 or 1", i + 1);
    }
    return s;
}

} // namespace reefer
