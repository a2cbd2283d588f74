#pragma once

// Electrified reefer trailer: generator axle, traction battery and a constant
// refrigeration (TRU) load.

#include "reefer/error.hpp"

#include <algorithm>

namespace reefer {

struct BatteryParams {
    double capacity_wh = 20000.0;
    double eta_charge = 0.95;
    double eta_discharge = 0.95;
    double soc_init = 0.90;
    double soc_floor = 0.20;
    double soc_cap = 1.00;

    double capacity_j() const { return capacity_wh * 3600.0; }

    void validate() const {
        if (!(capacity_wh > 0)) throw InvalidArgument("battery: capacity_wh must be positive");
        if (!(eta_charge > 0 && eta_charge <= 1 && eta_discharge > 0 && eta_discharge <= 1))
            throw InvalidArgument("battery: efficiencies must lie in (0, 1]");
        if (!(0 <= soc_floor && soc_floor < soc_init && soc_init <= soc_cap && soc_cap <= 1))
            throw InvalidArgument("battery: need 0 <= soc_floor < soc_init <= soc_cap <= 1");
    }
};

struct TrailerParams {
    double p_gen_rated_w = 30000.0;  // two 15 kW machines
    double f_tow_max_n = 3600.0;     // axle force up to v_base
    double v_base_mps = 8.33;        // constant mechanical power above this speed
    double eta_gen = 0.90;
    BatteryParams batt{};
    double p_tru_w = 7000.0;

    void validate() const {
        if (!(p_gen_rated_w > 0 && f_tow_max_n > 0 && v_base_mps > 0 && p_tru_w > 0))
            throw InvalidArgument("trailer: parameters must be positive");
        if (!(eta_gen > 0 && eta_gen <= 1)) throw InvalidArgument("trailer: eta_gen must lie in (0, 1]");
        batt.validate();
    }
};

struct BatteryState {
    double soc = 0.0;
};

/// Axle force envelope of the generator: flat up to v_base, constant power above.
inline double towing_force_max(double v_mps, const TrailerParams& p) {
    if (v_mps < 0) throw InvalidArgument("towing_force_max: negative speed");
    if (v_mps == 0) return 0.0;
    if (v_mps <= p.v_base_mps) return p.f_tow_max_n;
    return p.f_tow_max_n * p.v_base_mps / v_mps;
}

/// Largest mechanical generator power that keeps the battery at or below its cap
/// over one step (the TRU draw of the same step is not credited).
inline double charge_headroom_mech_w(double soc, const TrailerParams& p, double dt_s) {
    const double room = std::max(0.0, p.batt.soc_cap - soc) * p.batt.capacity_j();
    return room / (p.eta_gen * p.batt.eta_charge * dt_s);
}

struct RecuperationPower {
    double p_elec_w = 0.0;
    double p_mech_w = 0.0;
};

/// Braking power taken by the generator axle; the rest goes to friction brakes.
inline RecuperationPower recuperation_power(double f_req_n, double v_mps, BatteryState state,
                                            const TrailerParams& p, double dt_s) {
    if (!(f_req_n < 0)) throw InvalidArgument("recuperation_power: requires a braking demand");
    if (!(v_mps > 0)) throw InvalidArgument("recuperation_power: vehicle must be moving");
    const double force = std::min(-f_req_n, towing_force_max(v_mps, p));
    const double p_mech = std::min(force * v_mps, charge_headroom_mech_w(state.soc, p, dt_s));
    return {p.eta_gen * p_mech, p_mech};
}

struct BatteryStep {
    BatteryState state;
    bool depleted = false;  // energy balance went below zero and was clamped
    double shortfall = 0.0;  // SoC the clamp absorbed
};

/// Energy balance over one step. soc is clamped to [0, 1].
inline BatteryStep battery_step(BatteryState state, double p_charge_w, double p_load_w, double dt_s,
                                const BatteryParams& p) {
    if (p_charge_w < 0 || p_load_w < 0) throw InvalidArgument("battery_step: powers must be non-negative");
    const double delta = (p_charge_w * p.eta_charge - p_load_w / p.eta_discharge) * dt_s / p.capacity_j();
    const double soc = state.soc + delta;
    if (soc < 0) return {{0.0}, true, -soc};
    return {{std::min(soc, 1.0)}, false, 0.0};
}

} // namespace reefer
