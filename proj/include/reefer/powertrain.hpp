#pragma once

// Truck longitudinal dynamics and a parametric diesel fuel model.
//
// The engine is described by a smooth efficiency surface instead of a gridded
// map: efficiency peaks at (rpm_opt, full load) and falls off quadratically in
// engine speed and in part load. Fuel is brake power over efficiency plus a
// constant idle flow.

#include "reefer/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace reefer {

struct EngineParams {
    double tau_max_nm = 2500.0;     // plateau torque
    double rpm_idle = 600.0;
    double rpm_plateau_lo = 1000.0;
    double rpm_plateau_hi = 1400.0;
    double rpm_max = 1800.0;
    double eta_max = 0.45;          // peak brake efficiency
    double rpm_opt = 1200.0;
    double c_speed = 0.35;
    double c_load = 0.45;
    double lhv_vol_Jpl = 35.8e6;    // diesel, J per liter

    // Torque envelope: 50% of plateau at idle, 60% at rpm_max, linear in between.
    static constexpr double torque_frac_idle = 0.5;
    static constexpr double torque_frac_max = 0.6;
    static constexpr double eta_min = 0.05;

    void validate() const {
        if (!(rpm_idle > 0 && rpm_idle < rpm_plateau_lo && rpm_plateau_lo <= rpm_opt &&
              rpm_opt <= rpm_plateau_hi && rpm_plateau_hi < rpm_max))
            throw InvalidArgument("engine: rpm ordering idle < plateau_lo <= opt <= plateau_hi < max violated");
        if (!(eta_max > 0 && eta_max < 0.5)) throw InvalidArgument("engine: eta_max must lie in (0, 0.5)");
        if (!(tau_max_nm > 0 && lhv_vol_Jpl > 0)) throw InvalidArgument("engine: tau_max and lhv must be positive");
        if (!(c_speed >= 0 && c_load >= 0 && c_load < 1)) throw InvalidArgument("engine: bad fall-off coefficients");
    }
};

struct VehicleParams {
    double mass_kg = 40000.0;
    double crr = 0.0055;
    double cda_m2 = 5.6;
    double rho_air_kgm3 = 1.188;
    double g_ms2 = 9.81;
    double wheel_radius_m = 0.49;
    double driveline_eff = 0.93;
    std::vector<double> gear_ratios{14.9, 11.6, 9.0, 7.0, 5.4, 4.2, 3.3, 2.5, 2.0, 1.5, 1.2, 1.0};
    double final_drive_ratio = 2.64;
    double idle_fuel_Lps = 1.1e-4;
    EngineParams engine{};

    void validate() const {
        if (!(mass_kg > 0)) throw InvalidArgument("vehicle: mass_kg must be positive");
        if (!(driveline_eff > 0 && driveline_eff <= 1)) throw InvalidArgument("vehicle: driveline_eff must lie in (0, 1]");
        if (!(crr > 0 && cda_m2 > 0 && rho_air_kgm3 > 0 && g_ms2 > 0 && wheel_radius_m > 0 &&
              final_drive_ratio > 0 && idle_fuel_Lps > 0))
            throw InvalidArgument("vehicle: parameters must be positive");
        if (gear_ratios.empty()) throw InvalidArgument("vehicle: gear_ratios empty");
        for (std::size_t i = 0; i < gear_ratios.size(); ++i) {
            if (!(gear_ratios[i] > 0)) throw InvalidArgument("vehicle: gear ratios must be positive");
            if (i > 0 && !(gear_ratios[i] < gear_ratios[i - 1]))
                throw InvalidArgument("vehicle: gear_ratios must be strictly decreasing");
        }
        engine.validate();
    }
};

struct OperatingPoint {
    double rpm = 0.0;
    double torque_nm = 0.0;
    std::size_t gear_index = 0;
};

/// Signed wheel force needed to follow the trace; positive is traction, negative braking.
inline double traction_force(double v_mps, double accel_mps2, double grade_pct, const VehicleParams& p) {
    if (v_mps < 0) throw InvalidArgument("traction_force: negative speed");
    const double theta = std::atan(grade_pct / 100.0);
    const double rolling = v_mps > 0 ? p.mass_kg * p.g_ms2 * p.crr * std::cos(theta) : 0.0;
    const double climbing = p.mass_kg * p.g_ms2 * std::sin(theta);
    const double drag = 0.5 * p.rho_air_kgm3 * p.cda_m2 * v_mps * v_mps;
    return p.mass_kg * accel_mps2 + rolling + climbing + drag;
}

inline double engine_rpm(double v_mps, std::size_t gear, const VehicleParams& p) {
    const double total = p.gear_ratios[gear] * p.final_drive_ratio;
    return v_mps * total / (2.0 * std::numbers::pi * p.wheel_radius_m) * 60.0;
}

/// Torque envelope of the engine at a given speed.
inline double max_torque(double rpm, const EngineParams& e) {
    const double lo = EngineParams::torque_frac_idle;
    const double hi = EngineParams::torque_frac_max;
    double frac = 1.0;
    if (rpm <= e.rpm_idle) {
        frac = lo;
    } else if (rpm < e.rpm_plateau_lo) {
        frac = lo + (1.0 - lo) * (rpm - e.rpm_idle) / (e.rpm_plateau_lo - e.rpm_idle);
    } else if (rpm > e.rpm_plateau_hi) {
        const double x = std::min(1.0, (rpm - e.rpm_plateau_hi) / (e.rpm_max - e.rpm_plateau_hi));
        frac = 1.0 - (1.0 - hi) * x;
    }
    return frac * e.tau_max_nm;
}

/// Picks the tallest gear that keeps the engine at or above the plateau.
/// Falls back to the first gear when even that runs below the plateau.
inline std::size_t select_gear(double v_mps, const VehicleParams& p) {
    if (!(v_mps > 0)) throw InvalidArgument("select_gear: vehicle must be moving");
    const std::size_t top = p.gear_ratios.size() - 1;
    if (engine_rpm(v_mps, top, p) > p.engine.rpm_max) throw OverspeedError();
    for (std::size_t g = top + 1; g-- > 0;) {
        if (engine_rpm(v_mps, g, p) >= p.engine.rpm_plateau_lo) return g;
    }
    return 0;
}

/// Engine speed and torque needed to deliver f_wheel_n at v_mps.
/// Below idle the clutch slips and the engine is held at rpm_idle.
inline OperatingPoint operating_point(double f_wheel_n, double v_mps, const VehicleParams& p) {
    if (f_wheel_n < 0) throw InvalidArgument("operating_point: negative wheel force");
    const std::size_t gear = select_gear(v_mps, p);
    const double rpm = std::max(engine_rpm(v_mps, gear, p), p.engine.rpm_idle);
    const double total = p.gear_ratios[gear] * p.final_drive_ratio;
    const double torque = f_wheel_n * p.wheel_radius_m / (total * p.driveline_eff);
    if (torque > max_torque(rpm, p.engine) * (1.0 + 1e-12)) throw TorqueLimitError();
    return {rpm, torque, gear};
}

inline double brake_efficiency(double rpm, double torque_nm, const EngineParams& e) {
    const double span = (rpm - e.rpm_opt) / (e.rpm_max - e.rpm_idle);
    const double u = torque_nm / max_torque(rpm, e);
    const double eta = e.eta_max * (1.0 - e.c_speed * span * span) * (1.0 - e.c_load * (1.0 - u) * (1.0 - u));
    return std::max(eta, EngineParams::eta_min);
}

/// Diesel flow in liters per second at an operating point.
inline double fuel_rate(const OperatingPoint& op, const VehicleParams& p) {
    const double omega = op.rpm * 2.0 * std::numbers::pi / 60.0;
    const double power = op.torque_nm * omega;
    if (power <= 0) return p.idle_fuel_Lps;
    return power / (brake_efficiency(op.rpm, op.torque_nm, p.engine) * p.engine.lhv_vol_Jpl) + p.idle_fuel_Lps;
}

struct BaseFuel {
    double rate_Lps = 0.0;
    bool saturated = false;  // demand exceeded the torque envelope and was clipped
};

/// Fuel flow for following the trace without towing. Braking and standstill
/// steps idle; demand beyond the engine envelope is clipped to it.
inline BaseFuel base_fuel(double f_req_n, double v_mps, const VehicleParams& p) {
    if (f_req_n <= 0 || v_mps <= 0) return {p.idle_fuel_Lps, false};
    try {
        return {fuel_rate(operating_point(f_req_n, v_mps, p), p), false};
    } catch (const TorqueLimitError&) {
        const std::size_t gear = select_gear(v_mps, p);
        const double rpm = std::max(engine_rpm(v_mps, gear, p), p.engine.rpm_idle);
        return {fuel_rate({rpm, max_torque(rpm, p.engine), gear}, p), true};
    }
}

/// Extra fuel flow caused by adding f_tow_n of generator load on top of f_base_n.
inline double marginal_towing_fuel(double f_base_n, double f_tow_n, double v_mps, const VehicleParams& p) {
    if (f_base_n < 0) throw TowingUnavailable("towing unavailable while braking");
    if (f_tow_n == 0) return 0.0;
    OperatingPoint with_tow;
    try {
        with_tow = operating_point(f_base_n + f_tow_n, v_mps, p);
    } catch (const TorqueLimitError&) {
        throw TowingUnavailable("towing unavailable: full power");
    }
    return fuel_rate(with_tow, p) - fuel_rate(operating_point(f_base_n, v_mps, p), p);
}

} // namespace reefer
